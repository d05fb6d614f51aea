#pragma once

// One-particle reduced density matrix of a two-body grid state, its spectrum
// (occupancies) and the entropies built from it. Entropies are in bits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/matrix.hpp"
#include "dipole/numerics/sym_eig.hpp"
#include "dipole/twobody.hpp"

namespace dipole {

/// Occupancies sorted descending. For fermions each doubly degenerate pair is stored
/// once, so 2 * sum(occupancies) = 1; bosons satisfy sum(occupancies) = 1.
struct EntanglementSpectrum {
  std::vector<double> occupancies;
  Statistics statistics = Statistics::boson;
  double s_vn = 0.0;
  double participation_ratio = 0.0;

  /// Number of Schmidt coefficients with occupancy above the threshold. For fermions
  /// this counts degenerate pairs (the Slater rank).
  std::size_t schmidt_count(double threshold = 1e-6) const {
    return static_cast<std::size_t>(
        std::count_if(occupancies.begin(), occupancies.end(), [&](double l) { return l > threshold; }));
  }

  double lambda_max() const { return occupancies.empty() ? 0.0 : occupancies.front(); }

  int degeneracy() const { return statistics == Statistics::fermion ? 2 : 1; }

  std::vector<double> full_occupancies() const {
    std::vector<double> all;
    for (double l : occupancies)
      for (int k = 0; k < degeneracy(); ++k) all.push_back(l);
    return all;
  }
};

namespace detail {

inline double plogp(double l) { return l > 0.0 ? l * std::log2(l) : 0.0; }

}  // namespace detail

inline double vn_entropy(const EntanglementSpectrum& spec) {
  double s = 0.0;
  for (double l : spec.occupancies) s -= detail::plogp(l);
  if (spec.statistics == Statistics::fermion) return -1.0 + 2.0 * s;
  return s;
}

/// Renyi entropy of order q. Fermions carry the same -1 offset as the von Neumann
/// entropy, so both statistics tend to vn_entropy as q -> 1.
inline double renyi_entropy(const EntanglementSpectrum& spec, double q) {
  if (!(q > 0.0)) throw config_error("renyi_entropy: order q must be positive");
  if (q == 1.0) throw config_error("renyi_entropy: q = 1 is the von Neumann entropy; use vn_entropy");
  double s = 0.0;
  for (double l : spec.occupancies)
    if (l > 0.0) s += std::pow(l, q);
  if (spec.statistics == Statistics::fermion) return std::log2(2.0 * s) / (1.0 - q) - 1.0;
  return std::log2(s) / (1.0 - q);
}

/// Builds a spectrum from raw eigenvalues of the (grid-weighted) density matrix:
/// clips round-off negatives, sorts, verifies normalization and, for fermions, the
/// pairing of degenerate occupancies before keeping one per pair.
inline EntanglementSpectrum make_spectrum(std::vector<double> eigenvalues, Statistics stat) {
  for (double& l : eigenvalues) {
    if (l < -1e-10) throw numerical_quality_error("occupancy below -1e-10: density matrix is not positive");
    if (l < 0.0) l = 0.0;
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());

  EntanglementSpectrum spec;
  spec.statistics = stat;
  double sum_sq = 0.0;
  for (double l : eigenvalues) sum_sq += l * l;
  spec.participation_ratio = sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;

  if (stat == Statistics::boson) {
    spec.occupancies = std::move(eigenvalues);
  } else {
    if (eigenvalues.size() % 2 == 1) eigenvalues.push_back(0.0);
    for (std::size_t k = 0; k + 1 < eigenvalues.size(); k += 2) {
      if (std::abs(eigenvalues[k] - eigenvalues[k + 1]) > 1e-6)
        throw numerical_quality_error("fermionic occupancies are not pairwise degenerate (grid under-resolved?)");
      spec.occupancies.push_back(0.5 * (eigenvalues[k] + eigenvalues[k + 1]));
    }
  }

  double total = 0.0;
  for (double l : spec.occupancies) total += l;
  total *= spec.degeneracy();
  if (std::abs(total - 1.0) > 1e-8) throw numerical_quality_error("occupancies do not sum to one");
  spec.s_vn = vn_entropy(spec);
  return spec;
}

/// rho(x_i, x_j) = h * sum_k psi(x_i, y_k) psi(x_j, y_k).
inline Matrix reduced_density_matrix(const TwoBodyState& state) {
  const auto n = static_cast<std::size_t>(state.grid.points);
  const double h = state.grid.spacing();
  Matrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) rho(i, j) = rho(j, i) = h * dot(state.values.row(i), state.values.row(j));
  return rho;
}

namespace detail {

// Sign of psi(-x1, -x2) = P psi(x1, x2), or nullopt if the state has no definite total parity.
inline std::optional<int> total_parity(const Matrix& v) {
  const std::size_t n = v.rows();
  const double tol = 1e-12 * v.max_abs();
  bool even = true, odd = true;
  for (std::size_t i = 0; i < n && (even || odd); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = v(i, j), b = v(n - 1 - i, n - 1 - j);
      if (std::abs(a - b) > tol) even = false;
      if (std::abs(a + b) > tol) odd = false;
    }
  }
  if (even) return 1;
  if (odd) return -1;
  return std::nullopt;
}

// Grid density matrix (times h) split into the blocks acting on even and odd functions
// of x. The state's total parity makes every row of the folded wavefunction itself
// even or odd in y, so the y-sum is folded as well.
struct ParityBlocks {
  Matrix even;  // basis (e_i + e_{n-1-i})/sqrt2, plus the centre node for odd n
  Matrix odd;   // basis (e_i - e_{n-1-i})/sqrt2
};

inline Matrix folded_gram(const Matrix& v, bool even_rows, int parity, double h) {
  const std::size_t n = v.rows();
  const std::size_t half = n / 2;
  const bool centre = n % 2 == 1;
  const std::size_t rows = half + ((even_rows && centre) ? 1 : 0);
  const bool even_cols = (even_rows ? parity : -parity) > 0;
  const std::size_t cols = half + ((even_cols && centre) ? 1 : 0);

  const double r2 = 1.0 / std::numbers::sqrt2;
  Matrix folded(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      double a;
      if (i < half) {
        a = even_rows ? (v(i, k) + v(n - 1 - i, k)) * r2 : (v(i, k) - v(n - 1 - i, k)) * r2;
      } else {
        a = v(half, k);
      }
      // Column mirror pairs contribute twice; the centre column once.
      folded(i, k) = k < half ? a * std::numbers::sqrt2 : a;
    }
  }
  Matrix gram(rows, rows);
  const double w = h * h;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < rows; ++j) gram(i, j) = gram(j, i) = w * dot(folded.row(i), folded.row(j));
  return gram;
}

inline ParityBlocks parity_blocks(const TwoBodyState& state, int parity) {
  const double h = state.grid.spacing();
  return {folded_gram(state.values, true, parity, h), folded_gram(state.values, false, parity, h)};
}

// Lift a block eigenvector back onto the full grid.
inline std::vector<double> unfold(std::span<const double> coeffs, std::size_t n, bool even) {
  std::vector<double> out(n, 0.0);
  const std::size_t half = n / 2;
  const double r2 = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < half; ++i) {
    out[i] = coeffs[i] * r2;
    out[n - 1 - i] = (even ? 1.0 : -1.0) * coeffs[i] * r2;
  }
  if (even && n % 2 == 1) out[half] = coeffs[half];
  return out;
}

}  // namespace detail

/// Occupancies of the state: eigenvalues of h * rho.
inline EntanglementSpectrum occupancy_spectrum(const TwoBodyState& state) {
  const double h = state.grid.spacing();
  std::vector<double> eigenvalues;
  if (const auto parity = detail::total_parity(state.values)) {
    const auto blocks = detail::parity_blocks(state, *parity);
    for (const Matrix* b : {&blocks.even, &blocks.odd}) {
      const auto r = numerics::sym_eig(*b, numerics::EigMode::values_only);
      eigenvalues.insert(eigenvalues.end(), r.eigenvalues.begin(), r.eigenvalues.end());
    }
  } else {
    Matrix rho = reduced_density_matrix(state);
    for (double& v : rho.flat()) v *= h;
    eigenvalues = numerics::sym_eig(rho, numerics::EigMode::values_only).eigenvalues;
  }
  return make_spectrum(std::move(eigenvalues), state.statistics);
}

/// Leading `count` natural orbitals as rows of the result, normalized to unit L2 norm on
/// the grid and signed positive at the first node where |orbital| exceeds 1e-3 of its
/// maximum. Degenerate orbitals come out as parity-definite combinations.
inline Matrix natural_orbitals(const TwoBodyState& state, int count) {
  const auto n = static_cast<std::size_t>(state.grid.points);
  if (count < 0 || static_cast<std::size_t>(count) > n) throw config_error("natural_orbitals: count exceeds grid size");
  const double h = state.grid.spacing();

  struct Candidate {
    double occupancy;
    std::vector<double> vector;
  };
  std::vector<Candidate> candidates;
  auto take = [&](const numerics::SymmetricEigResult& r, auto&& lift) {
    const std::size_t m = r.eigenvalues.size();
    for (std::size_t k = 0; k < std::min<std::size_t>(m, count); ++k) {
      const std::size_t col = m - 1 - k;
      std::vector<double> c(m);
      for (std::size_t i = 0; i < m; ++i) c[i] = r.eigenvectors(i, col);
      candidates.push_back({r.eigenvalues[col], lift(c)});
    }
  };

  if (const auto parity = detail::total_parity(state.values)) {
    const auto blocks = detail::parity_blocks(state, *parity);
    take(numerics::sym_eig(blocks.even), [&](const std::vector<double>& c) { return detail::unfold(c, n, true); });
    take(numerics::sym_eig(blocks.odd), [&](const std::vector<double>& c) { return detail::unfold(c, n, false); });
  } else {
    take(numerics::sym_eig(reduced_density_matrix(state)), [](const std::vector<double>& c) { return c; });
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.occupancy > b.occupancy; });

  Matrix out(count, n);
  const double scale = 1.0 / std::sqrt(h);
  for (int k = 0; k < count; ++k) {
    auto& v = candidates[k].vector;
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    double sign = 1.0;
    for (double x : v) {
      if (std::abs(x) > 1e-3 * peak) {
        sign = x > 0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out(k, i) = sign * scale * v[i];
  }
  return out;
}

/// CSV export: l, lambda, degeneracy.
inline void write_spectrum_csv(const EntanglementSpectrum& spec, std::ostream& os) {
  os << "# dipole-spectrum v1 statistics=" << to_string(spec.statistics) << '\n';
  os << "l,lambda,degeneracy\n";
  os.precision(17);
  for (std::size_t l = 0; l < spec.occupancies.size(); ++l)
    os << l << ',' << spec.occupancies[l] << ',' << spec.degeneracy() << '\n';
}

}  // namespace dipole
