#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dipole/numerics/special_functions.hpp"
#include "dipole/twobody.hpp"

using namespace dipole;
using numerics::ho_function;

namespace {

const GridSpec small_grid{8.0, 401};

double max_diff(const Matrix& a, const Matrix& b, double sign = 1.0) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) m = std::max(m, std::abs(a.flat()[i] - sign * b.flat()[i]));
  return m;
}

double grid_norm(const TwoBodyState& s) {
  double sum = 0.0;
  for (double v : s.values.flat()) sum += v * v;
  return sum * std::pow(s.grid.spacing(), 2);
}

}  // namespace

TEST(DefaultGrid, Values) {
  const double max_spacing = 0.02 * std::pow(5.0, -0.25);
  const auto g0 = default_grid(InteractionModel::quasi1d(0.0, 5.0), 0.0, Statistics::boson);
  EXPECT_EQ(g0.half_width, 8.0);
  EXPECT_LE(g0.spacing(), max_spacing);
  EXPECT_GT(2.0 * g0.half_width / (g0.points - 2), max_spacing);  // smallest such n

  const auto g1 = default_grid(InteractionModel::strict1d(1000.0), 1000.0, Statistics::fermion);
  const double xc = std::pow(2.0, 0.1) * std::pow(3000.0, 0.2);
  EXPECT_NEAR(g1.half_width, xc / std::numbers::sqrt2 + 6.0, 1e-12);
  EXPECT_NEAR(g1.half_width, 9.76, 0.005);
  EXPECT_LE(g1.spacing(), max_spacing);
  EXPECT_THROW(default_grid(InteractionModel::strict1d(1.0), -1.0, Statistics::boson), config_error);
}

TEST(GridSpec, Validation) {
  EXPECT_THROW((GridSpec{8.0, 3}.validate()), config_error);
  EXPECT_THROW((GridSpec{0.0, 10}.validate()), config_error);
  EXPECT_THROW(assemble_tg(GridSpec{8.0, 2}), config_error);
}

TEST(Interacting, FreeLimitIsProductAndSlater) {
  const auto pair = quasi1d_pair(0.0, 5.0, 10);
  const auto model = InteractionModel::quasi1d(0.0, 5.0);
  const auto boson = assemble_interacting(pair.even, small_grid, model);
  const auto fermion = assemble_interacting(pair.odd, small_grid, model);
  EXPECT_EQ(boson.statistics, Statistics::boson);
  EXPECT_EQ(fermion.statistics, Statistics::fermion);
  EXPECT_LT(max_diff(boson.values, assemble_ideal(Statistics::boson, small_grid).values), 1e-12);
  const auto slater = assemble_ideal(Statistics::fermion, small_grid);
  const double d = std::min(max_diff(fermion.values, slater.values), max_diff(fermion.values, slater.values, -1.0));
  EXPECT_LT(d, 1e-12);
}

TEST(Interacting, ExchangeSymmetryExact) {
  const auto model = InteractionModel::quasi1d(1.0, 10.0);
  const auto pair = quasi1d_pair(1.0, 10.0, 60);
  const auto b = assemble_interacting(pair.even, small_grid, model);
  const auto f = assemble_interacting(pair.odd, small_grid, model);
  EXPECT_EQ(max_diff(b.values, b.values.transposed()), 0.0);
  EXPECT_EQ(max_diff(f.values, f.values.transposed(), -1.0), 0.0);
  EXPECT_NEAR(grid_norm(b), 1.0, 1e-12);
  EXPECT_NEAR(grid_norm(f), 1.0, 1e-12);
}

TEST(Interacting, StrictBosonVanishesAtContact) {
  const auto model = InteractionModel::strict1d(5.0);
  const auto rel = solve_strict1d(5.0, 30);
  const auto s = assemble_interacting(rel, small_grid, model);
  const double peak = s.values.max_abs();
  for (int i = 0; i < small_grid.points; ++i) EXPECT_LE(std::abs(s.values(i, i)), 1e-12 * peak);
}

TEST(Interacting, StrictFermionizationModulus) {
  for (double g : {1e-4, 1.0, 5.0}) {
    const auto model = InteractionModel::strict1d(g);
    const auto b = assemble_interacting(solve_strict1d(g, 40, std::nullopt, Parity::even), small_grid, model);
    const auto f = assemble_interacting(solve_strict1d(g, 40, std::nullopt, Parity::odd), small_grid, model);
    double d = 0.0;
    for (std::size_t i = 0; i < b.values.flat().size(); ++i)
      d = std::max(d, std::abs(std::abs(b.values.flat()[i]) - std::abs(f.values.flat()[i])));
    EXPECT_LT(d, 1e-5) << "g=" << g;
  }
}

TEST(Interacting, TailCheckNamesRequiredWidth) {
  const auto model = InteractionModel::quasi1d(1000.0, 10.0);
  const auto rel = quasi1d_ground(1000.0, 10.0, 80, Parity::even);
  try {
    assemble_interacting(rel, GridSpec{4.0, 200}, model);
    FAIL() << "expected grid_too_small_error";
  } catch (const grid_too_small_error& e) {
    EXPECT_GT(e.required_half_width(), 4.0);
    EXPECT_NE(std::string(e.what()).find("need L >="), std::string::npos);
    EXPECT_NO_THROW(assemble_interacting(rel, GridSpec{e.required_half_width(), 800}, model));
  }
}

TEST(TonksGirardeau, ContactNodeAndModulus) {
  const GridSpec odd{8.0, 401};  // x = 0 is a node
  const auto tg = assemble_tg(odd);
  EXPECT_EQ(tg.values(200, 200), 0.0);
  EXPECT_EQ(tg.statistics, Statistics::boson);
  EXPECT_EQ(tg.provenance.kind, Provenance::Kind::tonks_girardeau);
  const auto f = assemble_ideal(Statistics::fermion, odd);
  for (std::size_t i = 0; i < tg.values.flat().size(); ++i)
    EXPECT_NEAR(tg.values.flat()[i] * tg.values.flat()[i], f.values.flat()[i] * f.values.flat()[i], 1e-14);
  EXPECT_EQ(max_diff(tg.values, tg.values.transposed()), 0.0);
  EXPECT_NEAR(grid_norm(tg), 1.0, 1e-12);
}

TEST(TonksGirardeau, DensityMatchesIdealFermions) {
  const auto tg = assemble_tg(small_grid);
  const double h = small_grid.spacing();
  double worst = 0.0;
  for (int i = 0; i < small_grid.points; ++i) {
    double rho = 0.0;
    for (int j = 0; j < small_grid.points; ++j) rho += tg.values(i, j) * tg.values(i, j);
    rho *= h;
    const double x = small_grid.coordinate(i);
    const double ideal = 0.5 * (std::pow(ho_function(0, x), 2) + std::pow(ho_function(1, x), 2));
    worst = std::max(worst, std::abs(rho - ideal));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(StateCsv, HeaderAndRows) {
  const GridSpec g{8.0, 5};
  const auto s = assemble_ideal(Statistics::boson, GridSpec{8.0, 5});
  std::ostringstream os;
  write_state_csv(s, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# dipole-psi v1 statistics=boson provenance=ideal", 0), 0u);
  std::getline(is, line);
  EXPECT_EQ(line, "x1,x2,value");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, g.points * g.points);
}
