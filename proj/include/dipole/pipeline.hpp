#pragma once

// End-to-end evaluation: relative solve -> grid state -> occupancy spectrum, for one
// coupling or a scan over couplings.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dipole/entanglement.hpp"
#include "dipole/errors.hpp"
#include "dipole/parallel.hpp"
#include "dipole/solver.hpp"
#include "dipole/twobody.hpp"

namespace dipole {

/// Quasi-1D at a finite anisotropy, or the strict-1D limit (no epsilon).
struct ModelChoice {
  std::optional<double> epsilon;

  static ModelChoice strict() { return {}; }
  static ModelChoice quasi(double eps) { return {eps}; }

  bool is_strict() const { return !epsilon.has_value(); }

  InteractionModel at(double g) const {
    return epsilon ? InteractionModel::quasi1d(g, *epsilon) : InteractionModel::strict1d(g);
  }

  std::string label() const {
    if (!epsilon) return "strict";
    std::string s = std::to_string(*epsilon);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return "eps=" + s;
  }

  int default_basis_size() const { return epsilon ? 300 : 50; }
};

struct PipelineOptions {
  int basis_size = 0;                  // 0: 300 for quasi1d, 50 for strict1d
  std::optional<double> gamma;         // strict1d only; optimized when empty
  std::optional<double> grid_half_width;
  std::optional<int> grid_points;
};

inline Parity parity_of(Statistics stat) { return stat == Statistics::boson ? Parity::even : Parity::odd; }

/// Grid from the defaults with any explicit overrides applied. Overriding only L keeps
/// the default spacing bound.
inline GridSpec resolve_grid(const InteractionModel& model, double g, Statistics stat, const PipelineOptions& opts) {
  GridSpec grid = default_grid(model, g, stat);
  if (opts.grid_half_width) {
    const double spacing = grid.spacing();
    grid.half_width = *opts.grid_half_width;
    grid.points = static_cast<int>(std::ceil(2.0 * grid.half_width / spacing - 1e-9)) + 1;
  }
  if (opts.grid_points) grid.points = *opts.grid_points;
  grid.validate();
  return grid;
}

inline RelativeSolution solve_relative(const ModelChoice& choice, double g, Parity parity,
                                       const PipelineOptions& opts) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw config_error("coupling g must be finite and non-negative");
  const int size = opts.basis_size > 0 ? opts.basis_size : choice.default_basis_size();
  if (choice.is_strict()) {
    if (g == 0.0)
      throw config_error("strict1d with g = 0 is the ideal (non-interacting) system; use the ideal state instead");
    return solve_strict1d(g, size, opts.gamma, parity);
  }
  if (opts.gamma) throw config_error("gamma applies only to the strict1d pseudoharmonic basis");
  return quasi1d_ground(g, *choice.epsilon, size, parity);
}

struct PointResult {
  double g = 0.0;
  Statistics statistics = Statistics::boson;
  std::optional<RelativeSolution> relative;
  GridSpec grid;
  EntanglementSpectrum spectrum;
};

inline PointResult entropy_point(const ModelChoice& choice, double g, Statistics stat,
                                 const PipelineOptions& opts = {}) {
  PointResult r;
  r.g = g;
  r.statistics = stat;
  r.relative = solve_relative(choice, g, parity_of(stat), opts);
  const auto model = choice.at(g);
  r.grid = resolve_grid(model, g, stat, opts);
  r.spectrum = occupancy_spectrum(assemble_interacting(*r.relative, r.grid, model));
  return r;
}

inline PointResult ideal_point(Statistics stat, const PipelineOptions& opts = {}) {
  PointResult r;
  r.statistics = stat;
  r.grid = resolve_grid(InteractionModel::strict1d(0.0), 0.0, stat, opts);
  r.spectrum = occupancy_spectrum(assemble_ideal(stat, r.grid));
  return r;
}

inline PointResult tg_point(const PipelineOptions& opts = {}) {
  PointResult r;
  r.grid = resolve_grid(InteractionModel::strict1d(0.0), 0.0, Statistics::boson, opts);
  r.spectrum = occupancy_spectrum(assemble_tg(r.grid));
  return r;
}

/// n log-spaced couplings from g_min to g_max inclusive.
inline std::vector<double> log_grid(double g_min, double g_max, int n) {
  if (!(g_min > 0.0) || !(g_max >= g_min)) throw config_error("log_grid: need 0 < g_min <= g_max");
  if (n < 1) throw config_error("log_grid: need at least one point");
  if (n == 1) return {g_min};
  std::vector<double> g(n);
  const double a = std::log(g_min), b = std::log(g_max);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = g_min;
  g.back() = g_max;
  return g;
}

/// One scan row: either a result or the failure that stopped it.
struct ScanRow {
  double g = 0.0;
  std::optional<PointResult> result;
  std::string error_kind;  // config | convergence | numerical_quality | grid_too_small
  std::string error;
};

inline std::vector<ScanRow> entropy_scan(const ModelChoice& choice, Statistics stat, const std::vector<double>& gs,
                                         const PipelineOptions& opts = {}) {
  for (std::size_t i = 1; i < gs.size(); ++i)
    if (!(gs[i] > gs[i - 1])) throw config_error("entropy_scan: couplings must be strictly ascending");
  for (double g : gs)
    if (!(g > 0.0)) throw config_error("entropy_scan: couplings must be positive");

  return parallel_map(gs.size(), [&](std::size_t i) {
    ScanRow row;
    row.g = gs[i];
    try {
      row.result = entropy_point(choice, gs[i], stat, opts);
    } catch (const grid_too_small_error& e) {
      row.error_kind = "grid_too_small";
      row.error = e.what();
    } catch (const config_error& e) {
      row.error_kind = "config";
      row.error = e.what();
    } catch (const convergence_error& e) {
      row.error_kind = "convergence";
      row.error = e.what();
    } catch (const numerical_quality_error& e) {
      row.error_kind = "numerical_quality";
      row.error = e.what();
    }
    return row;
  });
}

}  // namespace dipole
