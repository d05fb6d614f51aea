#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dipole/numerics/quadrature.hpp"
#include "dipole/numerics/special_functions.hpp"
#include "dipole/solver.hpp"

using namespace dipole;
using numerics::QuadratureKind;

namespace {

// Orthonormal Laguerre p_n(t) of the pseudoharmonic basis, n < size.
std::vector<double> laguerre_row(double alpha, double t, int size) {
  std::vector<double> p(size);
  numerics::orthonormal_laguerre(alpha, t, p);
  return p;
}

// <u_m| x^{power} |u_n> for power in {-2, -3}: with t = x^2 the integrand is
// t^{alpha + power/2} e^{-t} p_m p_n, integrated exactly by the matching Gauss-Laguerre rule.
Matrix laguerre_oracle(int size, double gamma, double power) {
  const double alpha = gamma - 1.0;
  const auto rule = numerics::gauss_rule(QuadratureKind::generalized_laguerre, size + 2, alpha + power / 2.0);
  Matrix m(size, size);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto p = laguerre_row(alpha, rule.nodes[q], size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) m(i, j) += rule.weights[q] * p[i] * p[j];
  }
  return m;
}

// Long-double composite Simpson on [a, b].
long double simpson(auto&& f, long double a, long double b, int panels) {
  const long double h = (b - a) / panels;
  long double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
  return s * h / 3;
}

double norm_squared(const RelativeSolution& sol) {
  std::vector<double> edges;
  for (double x = -30.0; x <= 30.0 + 1e-9; x += 0.25) edges.push_back(x);
  const auto rule = numerics::composite_legendre(edges, 16);
  return rule.integrate([&](double x) { return std::pow(sol.evaluate(x), 2); });
}

}  // namespace

TEST(BasisSpec, Validation) {
  EXPECT_THROW(BasisSpec::pseudoharmonic(5, 1.5), config_error);
  EXPECT_THROW(BasisSpec::ho_even(0), config_error);
  EXPECT_NO_THROW(BasisSpec::pseudoharmonic(5, 1.5001));
}

TEST(Assemble, PairingAndSignErrors) {
  EXPECT_THROW(assemble_rr_matrix(BasisSpec::ho_even(5), InteractionModel::strict1d(1.0)), config_error);
  EXPECT_THROW(assemble_rr_matrix(BasisSpec::pseudoharmonic(5, 2.0), InteractionModel::quasi1d(1.0, 5.0)),
               config_error);
  EXPECT_THROW(assemble_rr_matrix(BasisSpec::ho_even(5), InteractionModel::quasi1d(-1.0, 5.0)), config_error);
}

TEST(Assemble, FreeEvenOscillator) {
  const Matrix h = assemble_rr_matrix(BasisSpec::ho_even(3), InteractionModel::quasi1d(0.0, 5.0));
  const double diag[] = {0.5, 2.5, 4.5};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(h(i, j), i == j ? diag[i] : 0.0);
}

TEST(Assemble, FreePseudoharmonicLadder) {
  // Without the interaction the basis diagonalizes the oscillator plus its own centrifugal
  // term A/x^2, so adding A x^{-2} back leaves the ladder 2n + gamma.
  const double gamma = 2.7;
  const int n = 6;
  const Matrix h = assemble_rr_matrix(BasisSpec::pseudoharmonic(n, gamma), InteractionModel::strict1d(0.0));
  const Matrix x2 = laguerre_oracle(n, gamma, -2.0);
  const double a = detail::centrifugal_strength(gamma);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) EXPECT_NEAR(h(i, j) + a * x2(i, j), i == j ? 2.0 * i + gamma : 0.0, 1e-12);
  for (int i = 0; i + 1 < n; ++i) EXPECT_NEAR((h(i + 1, i + 1) + a * x2(i + 1, i + 1)) - (h(i, i) + a * x2(i, i)), 2.0, 1e-12);
}

TEST(Assemble, InverseSquareMatchesQuadrature) {
  for (double gamma : {1.6, 3.0, 12.5}) {
    const int n = 12;
    const Matrix oracle = laguerre_oracle(n, gamma, -2.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_NEAR(detail::pseudoharmonic_inverse_square(i, j, gamma), oracle(i, j), 1e-11 * oracle.max_abs());
  }
}

TEST(Assemble, InverseCubeMatchesQuadrature) {
  for (double gamma : {1.6, 4.0, 31.0}) {
    const int n = 12;
    const Matrix oracle = laguerre_oracle(n, gamma, -3.0);
    const Matrix closed = detail::pseudoharmonic_inverse_cube(n, gamma);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) EXPECT_NEAR(closed(i, j), oracle(i, j), 1e-10 * oracle.max_abs()) << gamma;
  }
}

TEST(Assemble, HoQuadratureDoublingIsConverged) {
  for (double eps : {5.0, 50.0}) {
    const auto model = InteractionModel::quasi1d(1.0, eps);
    for (auto basis : {BasisSpec::ho_even(60), BasisSpec::ho_odd(60)}) {
      const Matrix a = assemble_rr_matrix(basis, model, 1);
      const Matrix b = assemble_rr_matrix(basis, model, 2);
      double diff = 0.0;
      for (std::size_t i = 0; i < a.flat().size(); ++i) diff = std::max(diff, std::abs(a.flat()[i] - b.flat()[i]));
      EXPECT_LT(diff, 1e-10) << "eps=" << eps;
    }
  }
}

TEST(Assemble, HoElementsMatchIndependentIntegration) {
  // 2 int_0^R phi_m phi_n g U(sqrt2 x) dx by long-double Simpson on a fine uniform grid.
  const auto model = InteractionModel::quasi1d(1.3, 50.0);
  const Matrix h = assemble_rr_matrix(BasisSpec::ho_even(8), model);
  for (auto [m, n] : {std::pair{0, 0}, {0, 3}, {2, 5}, {7, 7}}) {
    auto f = [&](long double x) {
      const double xd = static_cast<double>(x);
      return 2.0L * numerics::ho_function(2 * m, xd) * numerics::ho_function(2 * n, xd) * relative_interaction(xd, model);
    };
    const double ref = static_cast<double>(simpson(f, 0.0L, 14.0L, 40000)) + (m == n ? 2 * m + 0.5 : 0.0);
    EXPECT_NEAR(h(m, n), ref, 1e-9) << m << "," << n;
  }
}

TEST(Assemble, ParityBlocksDecouple) {
  // Full-line products of an even and an odd HO function with U(sqrt2|x|) integrate to zero.
  const auto model = InteractionModel::quasi1d(2.0, 10.0);
  std::vector<double> edges;
  for (double x = -20.0; x <= 20.0 + 1e-9; x += 0.125) edges.push_back(x);
  const auto rule = numerics::composite_legendre(edges, 16);
  for (auto [m, n] : {std::pair{0, 1}, {2, 5}, {4, 9}}) {
    const double v = rule.integrate([&](double x) {
      return numerics::ho_function(m, x) * numerics::ho_function(n, x) * relative_interaction(x, model);
    });
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(GroundState, ReferenceEnergiesAtGivenGamma) {
  struct Row {
    double g;
    int n;
    double gamma, energy, tol;
  };
  for (const Row& r : {Row{1.0, 30, 4.092, 2.67084, 2e-5}, Row{1e-4, 50, 1.581, 1.50330, 1e-4},
                       Row{5.0, 30, 6.240, 3.98383, 5e-5}, Row{1000.0, 10, 31.29, 24.6665, 5e-5}}) {
    const auto sol = ground_state(BasisSpec::pseudoharmonic(r.n, r.gamma), InteractionModel::strict1d(r.g));
    EXPECT_NEAR(sol.energy, r.energy, r.tol) << "g=" << r.g;
  }
}

TEST(GroundState, VariationalMonotonicity) {
  const auto strict = InteractionModel::strict1d(0.5);
  double prev = INFINITY;
  for (int n = 5; n <= 60; n += 5) {
    const double e = ground_state(BasisSpec::pseudoharmonic(n, 3.5), strict, Parity::even, {.certify = false}).energy;
    EXPECT_LE(e, prev + 1e-12) << n;
    prev = e;
  }
  const auto quasi = InteractionModel::quasi1d(0.5, 10.0);
  prev = INFINITY;
  for (int n = 10; n <= 120; n += 10) {
    const double e = ground_state(BasisSpec::ho_even(n), quasi, Parity::even, {.certify = false}).energy;
    EXPECT_LE(e, prev + 1e-12) << n;
    prev = e;
  }
}

TEST(GroundState, NormalizedAndParityExact) {
  const auto strict = solve_strict1d(1.0, 40, std::nullopt, Parity::odd);
  EXPECT_NEAR(norm_squared(strict), 1.0, 1e-8);
  const auto pair = quasi1d_pair(1.0, 10.0, 80);
  EXPECT_NEAR(norm_squared(pair.even), 1.0, 1e-8);
  EXPECT_NEAR(norm_squared(pair.odd), 1.0, 1e-8);
  for (double x : {0.1, 0.7, 2.3, 4.0}) {
    EXPECT_EQ(strict.evaluate(-x), -strict.evaluate(x));
    EXPECT_EQ(pair.even.evaluate(-x), pair.even.evaluate(x));
    EXPECT_EQ(pair.odd.evaluate(-x), -pair.odd.evaluate(x));
  }
}

TEST(GroundState, ConvergenceCertificate) {
  const auto sol = solve_strict1d(5.0, 40);
  ASSERT_TRUE(sol.convergence.has_value());
  EXPECT_EQ(sol.convergence->reference_size, 30);
  EXPECT_TRUE(sol.convergence->converged());
  EXPECT_FALSE(solve_strict1d(5.0, 20).convergence->converged());
  EXPECT_GT(sol.convergence->pointwise_shift, 0.0);
  EXPECT_FALSE(solve_strict1d(5.0, 30, std::nullopt, Parity::even, {.certify = false}).convergence);
}

TEST(OptimizeGamma, ReferenceValues) {
  EXPECT_NEAR(optimize_gamma(InteractionModel::strict1d(0.01), 50).gamma_opt, 1.960, 0.01);
  EXPECT_NEAR(optimize_gamma(InteractionModel::strict1d(1.0), 40).gamma_opt, 4.228, 0.05);
  EXPECT_NEAR(optimize_gamma(InteractionModel::strict1d(1000.0), 5).gamma_opt, 30.37, 0.3);
}

TEST(OptimizeGamma, TraceIsStationaryMinimum) {
  const auto model = InteractionModel::strict1d(1.0);
  const auto r = optimize_gamma(model, 30);
  const double h = 1e-4;
  const double slope = (rr_trace(model, 30, r.gamma_opt + h) - rr_trace(model, 30, r.gamma_opt - h)) / (2 * h);
  EXPECT_LT(std::abs(slope), 1e-3);
  EXPECT_GT(rr_trace(model, 30, r.gamma_opt * 1.05), r.trace);
  EXPECT_GT(rr_trace(model, 30, r.gamma_opt * 0.95), r.trace);
}

TEST(OptimizeGamma, EnergyInsensitiveNearOptimum) {
  struct Row {
    double g;
    int n;
  };
  // Small g is left out: there the optimum sits near the gamma > 3/2 floor and the energy is steep in gamma.
  for (const Row& r : {Row{1.0, 30}, Row{5.0, 20}, Row{1000.0, 10}}) {
    const auto model = InteractionModel::strict1d(r.g);
    const double gamma = optimize_gamma(model, r.n).gamma_opt;
    const double e0 = ground_state(BasisSpec::pseudoharmonic(r.n, gamma), model, Parity::even, {.certify = false}).energy;
    for (double f : {0.95, 1.05}) {
      const double e = ground_state(BasisSpec::pseudoharmonic(r.n, std::max(1.5001, gamma * f)), model, Parity::even,
                                    {.certify = false})
                           .energy;
      EXPECT_LT(std::abs(e - e0), 1e-3) << "g=" << r.g << " f=" << f;
    }
  }
}

TEST(OptimizeGamma, Preconditions) {
  EXPECT_THROW(optimize_gamma(InteractionModel::quasi1d(1.0, 5.0), 10), config_error);
  EXPECT_THROW(optimize_gamma(InteractionModel::strict1d(0.0), 10), config_error);
  EXPECT_THROW(optimize_gamma(InteractionModel::strict1d(1.0), 0), config_error);
  EXPECT_THROW(solve_strict1d(0.0, 10), config_error);
}

TEST(Quasi1d, FreeLimit) {
  const auto pair = quasi1d_pair(0.0, 5.0, 20);
  EXPECT_NEAR(pair.even.energy, 0.5, 1e-14);
  EXPECT_NEAR(pair.odd.energy, 1.5, 1e-14);
  for (double x : {0.0, 0.5, 1.7}) {
    EXPECT_NEAR(pair.even.evaluate(x), numerics::ho_function(0, x), 1e-14);
    EXPECT_NEAR(pair.odd.evaluate(x), numerics::ho_function(1, x), 1e-14);
  }
}

TEST(Quasi1d, StrongCouplingParityDegeneracy) {
  const auto pair = quasi1d_pair(1000.0, 50.0, 120);
  EXPECT_LT(std::abs(pair.even.energy - pair.odd.energy), 1e-4 * pair.even.energy);
  EXPECT_TRUE(pair.even.convergence->converged());
}

TEST(Quasi1d, SizeBounds) {
  EXPECT_THROW(quasi1d_pair(1.0, 5.0, 301), config_error);
  EXPECT_THROW(quasi1d_pair(1.0, 5.0, 0), config_error);
}

TEST(Quasi1d, ConvergedSearch) {
  const auto sol = quasi1d_converged(InteractionModel::quasi1d(10.0, 5.0), Parity::odd);
  ASSERT_TRUE(sol.convergence);
  EXPECT_TRUE(sol.convergence->converged());
  EXPECT_EQ(sol.parity, Parity::odd);
  EXPECT_LT(sol.basis.size, 300);
}

TEST(Strict1d, FermionizedWeakCoupling) {
  const auto even = solve_strict1d(1e-4, 50, std::nullopt, Parity::even);
  const auto odd = solve_strict1d(1e-4, 50, std::nullopt, Parity::odd);
  EXPECT_NEAR(even.energy, 1.5033, 1e-4);
  EXPECT_NEAR(odd.energy, 1.5033, 1e-4);
  for (double g : {1e-4, 1.0, 5.0})
    EXPECT_NEAR(solve_strict1d(g, 30, std::nullopt, Parity::even).energy,
                solve_strict1d(g, 30, std::nullopt, Parity::odd).energy, 1e-12);
}

TEST(StrictSolution, EvaluatesAtLargeGamma) {
  // gamma is in the hundreds here; the Laguerre normalization alone underflows.
  const auto sol = solve_strict1d(1e6, 50);
  EXPECT_GT(sol.basis.gamma, 100.0);
  double norm = 0.0;
  for (double x = -40.0; x <= 40.0; x += 0.002) {
    const double v = sol.evaluate(x);
    ASSERT_TRUE(std::isfinite(v)) << "x=" << x;
    norm += v * v * 0.002;
  }
  EXPECT_NEAR(norm, 1.0, 1e-8);
}
