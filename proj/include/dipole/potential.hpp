#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dipole/errors.hpp"
#include "dipole/numerics/special_functions.hpp"

namespace dipole {

/// Trap and dipole parameters in physical units (any consistent unit system).
struct PhysicalParams {
  double m = 1.0;
  double omega = 1.0;       // axial trap frequency
  double omega_perp = 1.0;  // transverse trap frequency
  double d2 = 0.0;          // dipole strength d^2
  double theta = 0.0;       // dipole tilt angle, radians
  double hbar = 1.0;

  double anisotropy() const { return omega_perp / omega; }

  void validate() const {
    if (!(m > 0 && omega > 0 && omega_perp > 0 && hbar > 0))
      throw config_error("PhysicalParams: m, omega, omega_perp and hbar must be positive");
    if (!(d2 >= 0)) throw config_error("PhysicalParams: d2 must be non-negative");
    if (!(anisotropy() >= 1.0)) throw config_error("PhysicalParams: omega_perp/omega must be >= 1");
  }
};

/// Interaction between the two particles: quasi-1D effective potential at anisotropy
/// epsilon, or its strictly 1D |x|^-3 limit.
struct InteractionModel {
  enum class Kind { quasi1d, strict1d };

  Kind kind = Kind::strict1d;
  double epsilon = std::numeric_limits<double>::infinity();
  double g = 0.0;

  static InteractionModel quasi1d(double g, double epsilon) {
    if (!(epsilon >= 1.0) || !std::isfinite(epsilon))
      throw config_error("InteractionModel: anisotropy epsilon must be finite and >= 1");
    if (!std::isfinite(g)) throw config_error("InteractionModel: g must be finite");
    return {Kind::quasi1d, epsilon, g};
  }
  static InteractionModel strict1d(double g) {
    if (!std::isfinite(g)) throw config_error("InteractionModel: g must be finite");
    return {Kind::strict1d, std::numeric_limits<double>::infinity(), g};
  }

  bool is_strict() const { return kind == Kind::strict1d; }
};

/// Dimensionless coupling g = d^2 sqrt(omega) m^{3/2} (1 + 3 cos 2 theta) / (8 hbar^{5/2}).
/// Negative for tilts beyond the magic angle; returned as-is.
inline double physical_to_g(const PhysicalParams& p) {
  p.validate();
  return p.d2 * std::sqrt(p.omega) * std::pow(p.m, 1.5) * (1.0 + 3.0 * std::cos(2.0 * p.theta)) /
         (8.0 * std::pow(p.hbar, 2.5));
}

namespace detail {

// f(u) = sqrt(2 pi)(1 + u^2) erfcx(u/sqrt2) - 2u, so that U(x) = eps^{3/2} f(sqrt(eps) x).
// Asymptotically f(u) = 2 sum_{n>=2} (-1)^n (2n-2)(2n-3)!! u^{1-2n} = 4/u^3 - 24/u^5 + ...
inline constexpr double effective_series_switch = 6.0 * std::numbers::sqrt2;

inline double effective_direct(double u) {
  return std::sqrt(2.0 * std::numbers::pi) * (1.0 + u * u) * numerics::erfcx(u / std::numbers::sqrt2) - 2.0 * u;
}

inline double effective_asymptotic(double u) {
  const double inv2 = 1.0 / (u * u);
  double term = 4.0 / (u * u * u);  // n = 2
  double sum = term;
  for (int n = 3; n < 200; ++n) {
    // ratio of consecutive terms: -(2n-2)(2n-3)/(2n-4) / u^2
    const double next = -term * (2.0 * n - 2.0) * (2.0 * n - 3.0) / (2.0 * n - 4.0) * inv2;
    if (std::abs(next) >= std::abs(term)) break;  // asymptotic series starts to diverge
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// Bare quasi-1D effective dipolar potential U(x) for separation x >= 0 at anisotropy eps.
///
/// U(0) = sqrt(2 pi) eps^{3/2}; U(x) -> 4/x^3 once eps x^2 >> 1. The erfc term and the
/// linear term cancel down to the x^-3 tail, so beyond sqrt(eps/2) x = 6 the tail's
/// asymptotic series replaces the direct form.
inline double u_effective(double x, double epsilon) {
  if (!(x >= 0.0)) throw std::domain_error("u_effective: separation must be non-negative");
  if (!(epsilon >= 1.0)) throw std::domain_error("u_effective: anisotropy must be >= 1");
  const double u = std::sqrt(epsilon) * x;
  const double scale = epsilon * std::sqrt(epsilon);
  if (u > detail::effective_series_switch) return scale * detail::effective_asymptotic(u);
  return scale * detail::effective_direct(u);
}

/// g U(|x2 - x1|) for quasi1d; g sqrt2 |(x2 - x1)/sqrt2|^{-3} for strict1d (+inf at contact).
inline double u_interaction(double x1, double x2, const InteractionModel& model) {
  if (model.g == 0.0) return 0.0;
  const double r = std::abs(x2 - x1);
  if (model.is_strict()) {
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    const double xr = r / std::numbers::sqrt2;
    return model.g * std::numbers::sqrt2 / (xr * xr * xr);
  }
  return model.g * u_effective(r, model.epsilon);
}

/// Relative-coordinate interaction g U(sqrt2 |x|), the form entering the relative Hamiltonian.
inline double relative_interaction(double x, const InteractionModel& model) {
  return u_interaction(0.0, std::numbers::sqrt2 * x, model);
}

}  // namespace dipole
