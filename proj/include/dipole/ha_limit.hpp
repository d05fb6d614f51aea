#pragma once

// Strong-coupling asymptotics from the harmonic approximation around the minimum of
// V(x) = x^2/2 + g sqrt2 / |x|^3. Expanding to second order gives a Gaussian pair state
// whose Schmidt decomposition follows from Mehler's formula with
//   w = 5^{1/4},  z = (w - 1)/(w + 1),  k_l = sqrt((1 - z^2)/2) z^l.

#include <cmath>
#include <numbers>
#include <vector>

#include "dipole/entanglement.hpp"
#include "dipole/errors.hpp"
#include "dipole/numerics/special_functions.hpp"
#include "dipole/solver.hpp"

namespace dipole::ha {

struct HAQuantities {
  double w = std::pow(5.0, 0.25);
  double z = (std::pow(5.0, 0.25) - 1.0) / (std::pow(5.0, 0.25) + 1.0);

  /// Relative-coordinate minimum of V: x_c^5 = 3 sqrt2 g.
  static double x_c(double g) {
    if (!(g > 0.0)) throw std::domain_error("classical_separation: g must be positive");
    return std::pow(2.0, 0.1) * std::pow(3.0 * g, 0.2);
  }
};

inline const HAQuantities& constants() {
  static const HAQuantities q{};
  return q;
}

inline double classical_separation(double g) { return HAQuantities::x_c(g); }

/// Exact normalization of C (e^{-a(x-x_c)^2} +- e^{-a(x+x_c)^2}), a = sqrt5/2.
inline double normalization(double g, Parity parity) {
  const double xc = classical_separation(g);
  const double s5 = std::sqrt(5.0);
  const double overlap = std::exp(-s5 * xc * xc);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return 1.0 / std::sqrt(2.0 * std::sqrt(std::numbers::pi / s5) * (1.0 + sign * overlap));
}

/// g -> infinity limit of the normalization, 5^{1/8} / (sqrt2 pi^{1/4}).
inline double limiting_normalization() {
  return std::pow(5.0, 0.125) / (std::numbers::sqrt2 * std::pow(std::numbers::pi, 0.25));
}

inline double ha_relative_wavefunction(double g, Parity parity, double x) {
  const double xc = classical_separation(g);
  const double a = 0.5 * std::sqrt(5.0);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return normalization(g, parity) * (std::exp(-a * (x - xc) * (x - xc)) + sign * std::exp(-a * (x + xc) * (x + xc)));
}

inline double schmidt_coefficient(int l) {
  if (l < 0) throw std::domain_error("schmidt_coefficient: l must be non-negative");
  const double z = constants().z;
  return std::sqrt(0.5 * (1.0 - z * z)) * std::pow(z, l);
}

/// v_l(x) = w^{1/4} pi^{-1/4} (2^l l!)^{-1/2} e^{-w x^2/2} H_l(sqrt(w) x), computed through
/// the normalized Hermite-function recurrence (no factorials formed).
inline double orbital(int l, double x) {
  if (l < 0 || l > 60) throw std::range_error("natural_orbital: order must lie in [0, 60]");
  const double w = constants().w;
  std::vector<double> phi(static_cast<std::size_t>(l) + 1);
  numerics::ho_functions(std::sqrt(w) * x, phi);
  return std::pow(w, 0.25) * phi.back();
}

enum class Side { left, right };

/// L_l(x) = v_l(x + x_c/sqrt2), R_l(x) = v_l(x - x_c/sqrt2).
inline double natural_orbital(int l, double x, Side side, double g) {
  const double shift = classical_separation(g) / std::numbers::sqrt2;
  return orbital(l, side == Side::left ? x + shift : x - shift);
}

/// Translated pair function C/pi^{1/4} exp(-(sqrt5 (x2 - x1)^2 + (x1 + x2)^2)/4) with the
/// limiting C.
inline double pair_function(double x1, double x2) {
  const double d = x2 - x1, s = x1 + x2;
  return limiting_normalization() / std::pow(std::numbers::pi, 0.25) * std::exp(-0.25 * (std::sqrt(5.0) * d * d + s * s));
}

/// Partial Schmidt sum sum_{l < terms} k_l v_l(x1) v_l(x2).
inline double mehler_reconstruction(double x1, double x2, int terms) {
  if (terms < 1) throw config_error("mehler_reconstruction: need at least one term");
  const double w = constants().w;
  const double z = constants().z;
  std::vector<double> a(terms), b(terms);
  numerics::ho_functions(std::sqrt(w) * x1, a);
  numerics::ho_functions(std::sqrt(w) * x2, b);
  double s = 0.0;
  double k = std::sqrt(0.5 * (1.0 - z * z));
  for (int l = 0; l < terms; ++l) {
    s += k * a[l] * b[l];
    k *= z;
  }
  return std::sqrt(w) * s;
}

/// Closed-form Renyi entropy of the asymptotic spectrum (each k_l^2 twice).
inline double ha_renyi(double q) {
  if (!(q > 0.0)) throw config_error("ha_renyi: q must be positive");
  if (q == 1.0) throw config_error("ha_renyi: q = 1 is the von Neumann limit; use ha_vn");
  const double z2 = constants().z * constants().z;
  return std::log2(std::pow(2.0, 1.0 - q) * std::pow(1.0 - z2, q) / (1.0 - std::pow(z2, q))) / (1.0 - q);
}

/// Asymptotic von Neumann entropy; the fermion value is the boson value minus one.
inline double ha_vn(Statistics stat) {
  const double z2 = constants().z * constants().z;
  const double boson = z2 / (z2 - 1.0) * std::log2(z2) - std::log2(1.0 - z2) + 1.0;
  return stat == Statistics::boson ? boson : boson - 1.0;
}

/// V(x_c) + sqrt5/2: minimum of the relative potential plus the zero-point energy of its
/// curvature V''(x_c) = 5.
inline double ha_energy(double g) {
  const double xc = classical_separation(g);
  return 0.5 * xc * xc + g * std::numbers::sqrt2 / (xc * xc * xc) + 0.5 * std::sqrt(5.0);
}

/// Asymptotic occupancy spectrum truncated after `terms` distinct values, in the
/// representation used by the numerical spectra.
inline EntanglementSpectrum asymptotic_spectrum(Statistics stat, int terms = 200) {
  std::vector<double> all;
  for (int l = 0; l < terms; ++l) {
    const double k = schmidt_coefficient(l);
    all.push_back(k * k);
    all.push_back(k * k);
  }
  // Restore exact normalization lost to truncation.
  double total = 0.0;
  for (double v : all) total += v;
  for (double& v : all) v /= total;
  return make_spectrum(std::move(all), stat);
}

}  // namespace dipole::ha
