#pragma once

// Rayleigh-Ritz solution of the relative-motion Hamiltonian
//   H = -1/2 d^2/dx^2 + 1/2 x^2 + g U(sqrt2 |x|)
// in a parity-adapted harmonic-oscillator basis (quasi-1D, U finite at the origin), and of
// its strict-1D limit with g sqrt2 / |x|^3 in the pseudoharmonic basis on the half line.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/matrix.hpp"
#include "dipole/numerics/quadrature.hpp"
#include "dipole/numerics/special_functions.hpp"
#include "dipole/numerics/sym_eig.hpp"
#include "dipole/potential.hpp"

namespace dipole {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

struct BasisSpec {
  enum class Kind { ho_even, ho_odd, pseudoharmonic };

  Kind kind = Kind::ho_even;
  int size = 1;
  double gamma = 0.0;  // pseudoharmonic only

  static BasisSpec ho_even(int n) { return checked({Kind::ho_even, n, 0.0}); }
  static BasisSpec ho_odd(int n) { return checked({Kind::ho_odd, n, 0.0}); }
  static BasisSpec pseudoharmonic(int n, double gamma) { return checked({Kind::pseudoharmonic, n, gamma}); }

  bool is_ho() const { return kind != Kind::pseudoharmonic; }

  void validate() const {
    if (size < 1) throw config_error("BasisSpec: size must be positive");
    if (kind == Kind::pseudoharmonic && !(gamma > 1.5))
      throw config_error("BasisSpec: pseudoharmonic basis requires gamma > 3/2");
  }

 private:
  static BasisSpec checked(BasisSpec b) {
    b.validate();
    return b;
  }
};

/// Energy change against a reference basis size. pointwise_shift is the largest change
/// of the wavefunction itself, an estimate of the expansion's pointwise error floor.
struct Convergence {
  int reference_size = 0;
  double energy_shift = 0.0;
  double tolerance = 1e-5;
  double pointwise_shift = 0.0;
  bool converged() const { return energy_shift < tolerance; }
};

/// Lowest eigenpair of the relative Hamiltonian in one parity sector.
struct RelativeSolution {
  double energy = 0.0;
  std::vector<double> coefficients;
  BasisSpec basis;
  Parity parity = Parity::even;
  std::optional<Convergence> convergence;

  double evaluate(double x) const {
    if (basis.is_ho()) {
      const int offset = basis.kind == BasisSpec::Kind::ho_odd ? 1 : 0;
      std::vector<double> phi(2 * coefficients.size() + 1);
      numerics::ho_functions(x, phi);
      double s = 0.0;
      for (std::size_t k = 0; k < coefficients.size(); ++k) s += coefficients[k] * phi[2 * k + offset];
      return s;
    }
    // Half-line solution phi(|x|) extended with the requested parity; 1/sqrt2 keeps unit norm.
    const double r = std::abs(x);
    if (r == 0.0) return 0.0;
    const double value = half_line_value(r) / std::numbers::sqrt2;
    return (parity == Parity::odd && x < 0) ? -value : value;
  }

  // phi(r) on r > 0, normalized on the half line.
  double half_line_value(double r) const {
    const double alpha = basis.gamma - 1.0;
    const double t = r * r;
    std::vector<double> p(coefficients.size());
    const double log_norm = numerics::scaled_orthonormal_laguerre(alpha, t, p);
    const double log_pre = 0.5 * std::log(2.0) + (basis.gamma - 0.5) * std::log(r) - 0.5 * t + log_norm;
    double s = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) s += coefficients[k] * p[k];
    return std::exp(log_pre) * s;
  }
};

namespace detail {

// Nodes on [0, R] resolving both the potential core (width ~ 1/sqrt(eps)) and the
// oscillations of HO functions up to index max_index. refine > 1 subdivides every panel.
inline numerics::QuadratureRule ho_half_line_rule(int max_index, double epsilon, int refine = 1) {
  const double reach = std::sqrt(2.0 * max_index + 1.0) + 9.0;
  const double core = std::min(reach, 8.0 / std::sqrt(epsilon));
  std::vector<double> edges;
  const int core_panels = 8 * refine;
  for (int i = 0; i <= core_panels; ++i) edges.push_back(core * i / core_panels);
  const double width = 0.25 / refine;
  const int outer = static_cast<int>(std::ceil((reach - core) / width));
  for (int i = 1; i <= outer; ++i) edges.push_back(core + (reach - core) * i / outer);
  return numerics::composite_legendre(edges, 16);
}

inline Matrix assemble_ho(const BasisSpec& basis, const InteractionModel& model, int refine) {
  const auto n = static_cast<std::size_t>(basis.size);
  const std::size_t offset = basis.kind == BasisSpec::Kind::ho_odd ? 1 : 0;
  const std::size_t max_index = 2 * (n - 1) + offset;
  Matrix h(n, n);
  for (std::size_t k = 0; k < n; ++k) h(k, k) = (2 * k + offset) + 0.5;
  if (model.g == 0.0) return h;

  const auto rule = ho_half_line_rule(static_cast<int>(max_index), model.epsilon, refine);
  const std::size_t q = rule.nodes.size();
  Matrix phi(n, q);
  Matrix weighted(n, q);
  std::vector<double> buf(max_index + 1);
  for (std::size_t i = 0; i < q; ++i) {
    const double x = rule.nodes[i];
    numerics::ho_functions(x, buf);
    // Same-parity products are even, so the full line is twice the half line.
    const double wv = 2.0 * rule.weights[i] * relative_interaction(x, model);
    for (std::size_t k = 0; k < n; ++k) {
      phi(k, i) = buf[2 * k + offset];
      weighted(k, i) = wv * phi(k, i);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) {
      const double v = dot(weighted.row(k), phi.row(l));
      h(k, l) += v;
      if (l != k) h(l, k) += v;
    }
  }
  return h;
}

// log of the squared norm of L_n^(alpha) under t^alpha e^{-t}: Gamma(n+alpha+1)/n!.
inline double log_laguerre_norm2(int n, double alpha) { return std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0); }

// Matrix of <u_m| x^{-3} |u_n> in the normalized pseudoharmonic basis. With t = x^2 this
// is int t^{alpha - 3/2} e^{-t} L_m^alpha L_n^alpha dt; expanding
//   L_n^alpha = sum_k c_{n-k} L_k^{alpha-3/2},  c_j = Gamma(j + 3/2) / (Gamma(3/2) j!)
// leaves a sum of positive terms.
inline Matrix pseudoharmonic_inverse_cube(int size, double gamma) {
  const double alpha = gamma - 1.0;
  const double beta = alpha - 1.5;
  const auto n = static_cast<std::size_t>(size);
  std::vector<double> log_c(n), log_h(n), log_mid(n);
  for (std::size_t j = 0; j < n; ++j) {
    log_c[j] = std::lgamma(j + 1.5) - std::lgamma(1.5) - std::lgamma(j + 1.0);
    log_h[j] = log_laguerre_norm2(static_cast<int>(j), alpha);
    log_mid[j] = log_laguerre_norm2(static_cast<int>(j), beta);
  }
  Matrix m(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      const double norm = -0.5 * (log_h[a] + log_h[b]);
      for (std::size_t k = 0; k <= a; ++k) s += std::exp(log_c[a - k] + log_c[b - k] + log_mid[k] + norm);
      m(a, b) = m(b, a) = s;
    }
  }
  return m;
}

// <u_m| x^{-2} |u_n> = exp((log h_min - log h_max)/2) / alpha.
inline double pseudoharmonic_inverse_square(int m, int n, double gamma) {
  const double alpha = gamma - 1.0;
  const int lo = std::min(m, n), hi = std::max(m, n);
  return std::exp(0.5 * (log_laguerre_norm2(lo, alpha) - log_laguerre_norm2(hi, alpha))) / alpha;
}

// (gamma - 3/2)(gamma - 1/2)/2: coefficient of x^{-2} in the pseudoharmonic oscillator.
inline double centrifugal_strength(double gamma) { return 0.5 * (gamma - 1.5) * (gamma - 0.5); }

inline Matrix assemble_pseudoharmonic(const BasisSpec& basis, const InteractionModel& model) {
  const int n = basis.size;
  const double gamma = basis.gamma;
  const double a = centrifugal_strength(gamma);
  Matrix h = model.g != 0.0 ? pseudoharmonic_inverse_cube(n, gamma) : Matrix(n, n);
  const double coupling = model.g * std::numbers::sqrt2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = coupling * h(i, j) - a * pseudoharmonic_inverse_square(i, j, gamma);
      if (i == j) v += 2.0 * i + gamma;
      h(i, j) = v;
    }
  }
  return h;
}

inline void check_pairing(const BasisSpec& basis, const InteractionModel& model) {
  basis.validate();
  if (model.g < 0.0) throw config_error("solver: attractive coupling g < 0 has no ground state in this model");
  if (basis.is_ho() && model.is_strict())
    throw config_error("solver: |x|^-3 interaction integrals diverge in the harmonic-oscillator basis; "
                       "use the pseudoharmonic basis for strict1d");
  if (!basis.is_ho() && !model.is_strict())
    throw config_error("solver: pseudoharmonic basis is only paired with the strict1d model");
}

// Fix the overall sign so the largest-magnitude sample of the wavefunction is positive.
inline void normalize_sign(RelativeSolution& sol) {
  double best = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double v = sol.evaluate(0.05 * i);
    if (std::abs(v) > std::abs(best)) best = v;
  }
  if (best < 0)
    for (double& c : sol.coefficients) c = -c;
}

inline RelativeSolution lowest_eigenpair(const BasisSpec& basis, const Matrix& h, Parity parity) {
  const auto eig = numerics::sym_eig(h);
  RelativeSolution sol;
  sol.basis = basis;
  sol.parity = parity;
  sol.energy = eig.eigenvalues.front();
  sol.coefficients.resize(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) sol.coefficients[i] = eig.eigenvectors(i, 0);
  normalize_sign(sol);
  return sol;
}

inline double lowest_eigenvalue(const Matrix& h) {
  return numerics::sym_eig(h, numerics::EigMode::values_only).eigenvalues.front();
}

// Outer edge of the region where the larger basis has weight.
inline double basis_reach(const BasisSpec& basis) {
  const double top = basis.is_ho() ? 2.0 * basis.size + 1.0 : 4.0 * basis.size + 2.0 * basis.gamma;
  return std::sqrt(top) + 6.0;
}

inline double sup_difference(const RelativeSolution& a, const RelativeSolution& b) {
  const double reach = std::max(basis_reach(a.basis), basis_reach(b.basis));
  double m = 0.0;
  for (double x = 0.02; x <= reach; x += 0.02) m = std::max(m, std::abs(a.evaluate(x) - b.evaluate(x)));
  return m;
}

inline Convergence compare(const RelativeSolution& sol, const RelativeSolution& ref, double tolerance) {
  return {ref.basis.size, std::abs(ref.energy - sol.energy), tolerance, sup_difference(sol, ref)};
}

}  // namespace detail

/// Rayleigh-Ritz matrix <u_m|H|u_n> in a normalized basis.
///
/// HO bases pair with quasi1d, pseudoharmonic with strict1d; anything else is a
/// config_error. refine subdivides the quadrature panels of the HO route (used to
/// certify quadrature convergence).
inline Matrix assemble_rr_matrix(const BasisSpec& basis, const InteractionModel& model, int refine = 1) {
  detail::check_pairing(basis, model);
  if (basis.is_ho()) return detail::assemble_ho(basis, model, refine);
  return detail::assemble_pseudoharmonic(basis, model);
}

struct SolveOptions {
  bool certify = true;          // attach an energy-shift certificate against size N - 10
  double tolerance = 1e-5;
};

/// Lowest eigenpair. For the pseudoharmonic basis parity selects the extension of the
/// half-line solution; for HO bases it is implied by the basis kind.
inline RelativeSolution ground_state(const BasisSpec& basis, const InteractionModel& model,
                                     Parity parity = Parity::even, SolveOptions opts = {}) {
  if (basis.is_ho()) parity = basis.kind == BasisSpec::Kind::ho_odd ? Parity::odd : Parity::even;
  auto sol = detail::lowest_eigenpair(basis, assemble_rr_matrix(basis, model), parity);
  if (opts.certify && basis.size > 10) {
    BasisSpec smaller = basis;
    smaller.size -= 10;
    const auto ref = detail::lowest_eigenpair(smaller, assemble_rr_matrix(smaller, model), parity);
    sol.convergence = detail::compare(sol, ref, opts.tolerance);
  }
  return sol;
}

/// Tr H^RR as a function of gamma; analytic apart from the x^-3 diagonal.
inline double rr_trace(const InteractionModel& model, int size, double gamma) {
  const double alpha = gamma - 1.0;
  const double a = detail::centrifugal_strength(gamma);
  double t = 0.0;
  for (int n = 0; n < size; ++n) t += 2.0 * n + gamma - a / alpha;
  if (model.g != 0.0) {
    const auto m = detail::pseudoharmonic_inverse_cube(size, gamma);
    t += model.g * std::numbers::sqrt2 * m.trace();
  }
  return t;
}

struct GammaSearch {
  double gamma_opt = 0.0;
  double trace = 0.0;
  double lower = 0.0;  // final scanned range
  double upper = 0.0;
};

/// Stationary point of gamma -> Tr H^RR (a minimum) for the strict1d model.
inline GammaSearch optimize_gamma(const InteractionModel& model, int size) {
  if (!model.is_strict()) throw config_error("optimize_gamma: only defined for the strict1d model");
  if (size < 1) throw config_error("optimize_gamma: basis size must be positive");
  if (!(model.g > 0.0)) throw config_error("optimize_gamma: requires g > 0");

  const double lower = 1.51;
  double upper = std::max(10.0, 4.0 * std::pow(3.0 * model.g, 0.4));
  auto trace_at = [&](double log_gamma) { return rr_trace(model, size, std::exp(log_gamma)); };

  // Coarse scan in log gamma to bracket the minimum, widening upward if it sits on the edge.
  constexpr int samples = 64;
  double a = 0, b = 0;
  for (int attempt = 0;; ++attempt) {
    const double lo = std::log(lower), hi = std::log(upper);
    std::vector<double> values(samples + 1);
    for (int i = 0; i <= samples; ++i) values[i] = trace_at(lo + (hi - lo) * i / samples);
    const auto best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
    if (best > 0 && best < samples) {
      a = lo + (hi - lo) * (best - 1) / samples;
      b = lo + (hi - lo) * (best + 1) / samples;
      break;
    }
    if (best == samples && attempt < 8) {
      upper *= 2.0;
      continue;
    }
    std::ostringstream msg;
    msg << "optimize_gamma: no stationary point of the trace in gamma in [" << lower << ", " << upper << "]";
    throw convergence_error(msg.str());
  }

  // Golden-section refinement.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = trace_at(c), fd = trace_at(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = trace_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = trace_at(d);
    }
  }
  const double gamma = std::exp(0.5 * (a + b));
  const double h = 1e-3 * gamma;
  const double curvature = rr_trace(model, size, gamma + h) + rr_trace(model, size, gamma - h) -
                           2.0 * rr_trace(model, size, gamma);
  if (!(curvature > 0.0)) throw convergence_error("optimize_gamma: stationary point is not a minimum of the trace");
  return {gamma, rr_trace(model, size, gamma), lower, upper};
}

/// Strict-1D ground state with gamma either given or optimized.
inline RelativeSolution solve_strict1d(double g, int size, std::optional<double> gamma = std::nullopt,
                                       Parity parity = Parity::even, SolveOptions opts = {}) {
  const auto model = InteractionModel::strict1d(g);
  if (!(g > 0.0)) throw config_error("solve_strict1d: g must be positive (g = 0 is the ideal system)");
  const double gam = gamma ? *gamma : optimize_gamma(model, size).gamma_opt;
  return ground_state(BasisSpec::pseudoharmonic(size, gam), model, parity, opts);
}

struct RelativePair {
  RelativeSolution even;
  RelativeSolution odd;
};

/// Lowest quasi-1D solution of one parity in the HO basis of size N. The attached
/// certificate compares against size N + 20.
inline RelativeSolution quasi1d_ground(double g, double epsilon, int size, Parity parity) {
  if (size < 1 || size > 300) throw config_error("quasi1d: basis size must lie in [1, 300]");
  const auto model = InteractionModel::quasi1d(g, epsilon);
  const auto kind = parity == Parity::even ? BasisSpec::Kind::ho_even : BasisSpec::Kind::ho_odd;
  auto sol = ground_state(BasisSpec{kind, size, 0.0}, model, parity, {.certify = false});
  const BasisSpec bigger{kind, size + 20, 0.0};
  const auto ref = detail::lowest_eigenpair(bigger, assemble_rr_matrix(bigger, model), parity);
  sol.convergence = detail::compare(sol, ref, 1e-5);
  return sol;
}

/// Lowest even and odd quasi-1D solutions in the HO bases of size N each.
inline RelativePair quasi1d_pair(double g, double epsilon, int size) {
  return {quasi1d_ground(g, epsilon, size, Parity::even), quasi1d_ground(g, epsilon, size, Parity::odd)};
}

/// Smallest HO basis (stepping by 20 up to 300) whose energy moved by less than tolerance
/// over the last step. The certificate records the last step; convergence may be false
/// if 300 was reached.
inline RelativeSolution quasi1d_converged(const InteractionModel& model, Parity parity, double tolerance = 1e-8,
                                          int start = 40, int max_size = 300) {
  const auto kind = parity == Parity::even ? BasisSpec::Kind::ho_even : BasisSpec::Kind::ho_odd;
  std::optional<RelativeSolution> previous;
  for (int n = start;; n = std::min(n + 20, max_size)) {
    const BasisSpec basis{kind, n, 0.0};
    auto sol = detail::lowest_eigenpair(basis, assemble_rr_matrix(basis, model), parity);
    const bool done = previous && std::abs(sol.energy - previous->energy) < tolerance;
    if (done || n == max_size) {
      sol.convergence = previous ? detail::compare(sol, *previous, tolerance) : Convergence{n, 0.0, tolerance, 0.0};
      return sol;
    }
    previous = std::move(sol);
  }
}

}  // namespace dipole
