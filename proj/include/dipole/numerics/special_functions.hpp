#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace dipole::numerics {

namespace detail {

// exp(u*u) with the rounding error of the square carried separately; exp(p) alone
// loses ~u^2 ulps once u^2 is in the hundreds.
inline double exp_square(double u) {
  const double p = u * u;
  const double e = std::fma(u, u, -p);
  return std::exp(p) * (1.0 + e);
}

// Laplace continued fraction for erfcx, evaluated bottom-up. Used for u >= 26, where
// 40 levels are far past convergence.
inline double erfcx_continued_fraction(double u) {
  double tail = u;
  for (int k = 40; k >= 1; --k) tail = u + 0.5 * k / tail;
  return 1.0 / (std::sqrt(std::numbers::pi) * tail);
}

}  // namespace detail

/// Scaled complementary error function exp(u^2) * erfc(u).
///
/// Finite for every u >= -26.6; below that 2*exp(u^2) exceeds the double range and the
/// result is +inf.
inline double erfcx(double u) {
  if (std::isnan(u)) throw std::domain_error("erfcx: NaN argument");
  if (u == std::numeric_limits<double>::infinity()) return 0.0;
  if (u < 0.0) {
    if (u < -26.6) return std::numeric_limits<double>::infinity();
    return 2.0 * detail::exp_square(u) - erfcx(-u);
  }
  if (u < 26.0) return detail::exp_square(u) * std::erfc(u);
  return detail::erfcx_continued_fraction(u);
}

/// Physicists' Hermite polynomial H_l(u) by three-term recurrence.
inline double hermite_poly(int l, double u) {
  if (l < 0 || l > 200) throw std::domain_error("hermite_poly: order must lie in [0, 200]");
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < l; ++k) {
    const double next = 2.0 * u * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  if (!std::isfinite(cur)) throw std::range_error("hermite_poly: value overflows double");
  return cur;
}

/// 1F1(-n; gamma; t), which terminates after n+1 terms. Summed directly as a polynomial.
inline double kummer_1f1_polynomial(int n, double gamma, double t) {
  if (!(gamma > 0.0)) throw std::domain_error("kummer_1f1_polynomial: gamma must be positive");
  if (n < 0 || n > 200) throw std::domain_error("kummer_1f1_polynomial: n must lie in [0, 200]");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) * t / ((gamma + k) * (k + 1.0));
    sum += term;
  }
  return sum;
}

/// Orthonormal harmonic-oscillator eigenfunctions phi_0..phi_{count-1} at x, written to out.
///
/// phi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2). The normalized recurrence never
/// forms the factorial, so it is stable for n in the thousands.
inline void ho_functions(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * x * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    out[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * out[n] - std::sqrt(n / (n + 1.0)) * out[n - 1];
  }
}

inline double ho_function(int n, double x) {
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  ho_functions(x, buf);
  return buf.back();
}

/// Laguerre polynomials scaled by sqrt(Gamma(alpha + 1)): the orthonormal values are
/// exp(log_norm) * out[k], with log_norm = -lgamma(alpha + 1) / 2 returned. Keeping the
/// factor separate avoids underflow for large alpha.
inline double scaled_orthonormal_laguerre(double alpha, double t, std::span<double> out) {
  const double log_norm = -0.5 * std::lgamma(alpha + 1.0);
  if (out.empty()) return log_norm;
  out[0] = 1.0;
  if (out.size() == 1) return log_norm;
  out[1] = (1.0 + alpha - t) / std::sqrt(1.0 + alpha);
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = ((2.0 * kk + 1.0 + alpha - t) * out[k] - std::sqrt(kk * (kk + alpha)) * out[k - 1]) /
                 std::sqrt((kk + 1.0) * (kk + 1.0 + alpha));
  }
  return log_norm;
}

/// Laguerre polynomials L_k^(alpha)(t), k < out.size(), normalized so that
/// int_0^inf t^alpha e^{-t} p_j p_k dt = delta_jk.
inline void orthonormal_laguerre(double alpha, double t, std::span<double> out) {
  const double scale = std::exp(scaled_orthonormal_laguerre(alpha, t, out));
  for (double& v : out) v *= scale;
}

}  // namespace dipole::numerics
