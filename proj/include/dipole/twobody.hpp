#pragma once

// Two-particle wavefunctions psi(x1, x2) sampled on a uniform symmetric grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dipole/errors.hpp"
#include "dipole/matrix.hpp"
#include "dipole/numerics/special_functions.hpp"
#include "dipole/potential.hpp"
#include "dipole/solver.hpp"

namespace dipole {

enum class Statistics { boson, fermion };

inline const char* to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

/// Uniform grid of `points` nodes on [-half_width, half_width].
struct GridSpec {
  double half_width = 8.0;
  int points = 0;

  double spacing() const { return 2.0 * half_width / (points - 1); }
  double coordinate(int i) const { return -half_width + i * spacing(); }

  void validate() const {
    if (!(half_width > 0.0)) throw config_error("GridSpec: half width must be positive");
    if (points < 4) throw config_error("GridSpec: at least 4 points are required");
  }
};

struct Provenance {
  enum class Kind { interacting, ideal, tonks_girardeau };
  Kind kind = Kind::ideal;
  double g = 0.0;
  InteractionModel model{};
};

inline const char* to_string(Provenance::Kind k) {
  switch (k) {
    case Provenance::Kind::interacting: return "interacting";
    case Provenance::Kind::ideal: return "ideal";
    case Provenance::Kind::tonks_girardeau: return "tonks_girardeau";
  }
  return "?";
}

struct TwoBodyState {
  GridSpec grid;
  Matrix values;  // values(i, j) = psi(x_i, x_j)
  Statistics statistics = Statistics::boson;
  Provenance provenance;
};

/// Relative-coordinate location of the potential minimum, 2^{1/10} (3g)^{1/5}.
inline double classical_separation_estimate(double g) { return std::pow(2.0, 0.1) * std::pow(3.0 * g, 0.2); }

/// L = max(8, x_c/sqrt2 + 6); spacing at most 0.02 * 5^{-1/4}.
inline GridSpec default_grid(const InteractionModel& /*model*/, double g, Statistics /*statistics*/) {
  if (!(g >= 0.0)) throw config_error("default_grid: g must be non-negative");
  const double reach = g > 0.0 ? classical_separation_estimate(g) / std::numbers::sqrt2 + 6.0 : 0.0;
  const double half_width = std::max(8.0, reach);
  const double max_spacing = 0.02 * std::min(1.0, std::pow(5.0, -0.25));
  const int points = static_cast<int>(std::ceil(2.0 * half_width / max_spacing)) + 1;
  return {half_width, points};
}

namespace detail {

inline constexpr double tail_tolerance = 1e-8;

inline double boundary_max(const Matrix& v) {
  const std::size_t n = v.rows();
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    m = std::max({m, std::abs(v(0, k)), std::abs(v(n - 1, k)), std::abs(v(k, 0)), std::abs(v(k, n - 1))});
  return m;
}

// Smallest half width (in steps of 0.5) whose square boundary keeps |psi| below the threshold.
inline double required_half_width(const std::function<double(double, double)>& psi, double start, double threshold) {
  for (double l = start + 0.5; l < 200.0; l += 0.5) {
    double m = 0.0;
    for (double s = -l; s <= l; s += 0.05)
      m = std::max({m, std::abs(psi(-l, s)), std::abs(psi(l, s)), std::abs(psi(s, -l)), std::abs(psi(s, l))});
    if (m <= threshold) return l;
  }
  return 200.0;
}

inline void normalize_on_grid(TwoBodyState& state) {
  const double h = state.grid.spacing();
  double sum = 0.0;
  for (double v : state.values.flat()) sum += v * v;
  const double scale = 1.0 / std::sqrt(sum * h * h);
  for (double& v : state.values.flat()) v *= scale;
}

// Boundary values must be below tail_tolerance of the peak, or below `floor`, the
// pointwise accuracy of the sampled function, whichever is larger.
inline void check_tail(const TwoBodyState& state, const std::function<double(double, double)>& psi,
                       double floor = 0.0) {
  const double threshold = std::max(tail_tolerance * state.values.max_abs(), floor);
  if (boundary_max(state.values) > threshold) {
    const double need = required_half_width(psi, state.grid.half_width, threshold);
    std::ostringstream msg;
    msg << "grid half width " << state.grid.half_width << " truncates the wavefunction tail; need L >= " << need;
    throw grid_too_small_error(msg.str(), need);
  }
}

inline double cm_ground(double big_x) { return numerics::ho_function(0, big_x); }

}  // namespace detail

/// psi(x1, x2) = psi_rel((x2 - x1)/sqrt2) * phi_0((x1 + x2)/sqrt2), normalized on the grid.
/// Even relative states give bosons, odd ones fermions.
inline TwoBodyState assemble_interacting(const RelativeSolution& rel, const GridSpec& grid,
                                         const InteractionModel& model) {
  grid.validate();
  const int n = grid.points;
  const double h = grid.spacing();
  const double sign = rel.parity == Parity::even ? 1.0 : -1.0;

  // On a uniform grid x2 - x1 and x1 + x2 take 2n - 1 distinct values each.
  std::vector<double> rel_vals(2 * n - 1), cm_vals(2 * n - 1);
  for (int k = 0; k < n; ++k) {
    const double v = rel.evaluate(k * h / std::numbers::sqrt2);
    rel_vals[n - 1 + k] = v;
    rel_vals[n - 1 - k] = sign * v;
  }
  for (int s = 0; s < 2 * n - 1; ++s) cm_vals[s] = detail::cm_ground((-2.0 * grid.half_width + s * h) / std::numbers::sqrt2);

  TwoBodyState state;
  state.grid = grid;
  state.values = Matrix(n, n);
  state.statistics = rel.parity == Parity::even ? Statistics::boson : Statistics::fermion;
  state.provenance = {Provenance::Kind::interacting, model.g, model};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) state.values(i, j) = rel_vals[j - i + n - 1] * cm_vals[i + j];

  // Expansion noise below the solver's own pointwise error is not a truncated tail.
  const double floor = rel.convergence ? rel.convergence->pointwise_shift * detail::cm_ground(0.0) : 0.0;
  detail::check_tail(
      state,
      [&rel](double x1, double x2) {
        return rel.evaluate((x2 - x1) / std::numbers::sqrt2) * detail::cm_ground((x1 + x2) / std::numbers::sqrt2);
      },
      floor);
  detail::normalize_on_grid(state);
  return state;
}

namespace detail {

template <class F>
TwoBodyState tabulate(const GridSpec& grid, F&& psi, Statistics stat, Provenance prov) {
  grid.validate();
  const int n = grid.points;
  TwoBodyState state;
  state.grid = grid;
  state.values = Matrix(n, n);
  state.statistics = stat;
  state.provenance = prov;
  std::vector<double> phi0(n), phi1(n);
  for (int i = 0; i < n; ++i) {
    phi0[i] = numerics::ho_function(0, grid.coordinate(i));
    phi1[i] = numerics::ho_function(1, grid.coordinate(i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) state.values(i, j) = psi(phi0[i], phi1[i], phi0[j], phi1[j]);
  check_tail(state, [&](double x1, double x2) {
    return psi(numerics::ho_function(0, x1), numerics::ho_function(1, x1), numerics::ho_function(0, x2),
               numerics::ho_function(1, x2));
  });
  normalize_on_grid(state);
  return state;
}

inline double slater(double a0, double a1, double b0, double b1) { return (a0 * b1 - a1 * b0) / std::numbers::sqrt2; }

}  // namespace detail

/// Non-interacting ground state: phi_0 x phi_0 for bosons, the phi_0/phi_1 Slater
/// determinant for fermions.
inline TwoBodyState assemble_ideal(Statistics stat, const GridSpec& grid) {
  const Provenance prov{Provenance::Kind::ideal, 0.0, InteractionModel{}};
  if (stat == Statistics::boson)
    return detail::tabulate(grid, [](double a0, double, double b0, double) { return a0 * b0; }, stat, prov);
  return detail::tabulate(grid, detail::slater, stat, prov);
}

/// Tonks-Girardeau state: modulus of the two-fermion Slater determinant.
inline TwoBodyState assemble_tg(const GridSpec& grid) {
  return detail::tabulate(
      grid, [](double a0, double a1, double b0, double b1) { return std::abs(detail::slater(a0, a1, b0, b1)); },
      Statistics::boson, {Provenance::Kind::tonks_girardeau, 0.0, InteractionModel{}});
}

/// CSV dump of x1,x2,value triples (row-major over the grid).
inline void write_state_csv(const TwoBodyState& state, std::ostream& os) {
  os << "# dipole-psi v1 statistics=" << to_string(state.statistics)
     << " provenance=" << to_string(state.provenance.kind) << " g=" << state.provenance.g << '\n';
  os << "x1,x2,value\n";
  const int n = state.grid.points;
  os.precision(12);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      os << state.grid.coordinate(i) << ',' << state.grid.coordinate(j) << ',' << state.values(i, j) << '\n';
}

}  // namespace dipole
