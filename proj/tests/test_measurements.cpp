#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wgf/analytic.hpp"
#include "wgf/measurements.hpp"
#include "wgf/scheme.hpp"

using namespace wgf;

namespace {

GridSpec sym_grid(int nx, int nt = 10) {
  GridSpec g;
  g.left = -1.0;
  g.right = 1.0;
  g.nx = nx;
  g.nt = nt;
  return g;
}

}  // namespace

TEST(Measurements, ExpectationBasics) {
  const GridSpec gs = sym_grid(40);
  const QuadratureWeights qs = trapezoid_weights(gs);
  SpatialProfile even(gs.num_x());
  for (int j = 0; j < gs.num_x(); ++j) even[j] = std::exp(-gs.x(j) * gs.x(j));
  EXPECT_NEAR(observe_expectation(even, gs, qs), 0.0, 1e-12);

  GridSpec g01;
  g01.left = 0.0;
  g01.right = 1.0;
  g01.nx = 25;
  g01.nt = 4;
  const QuadratureWeights q01 = trapezoid_weights(g01);
  EXPECT_NEAR(observe_expectation(SpatialProfile(g01.num_x(), 1.0), g01, q01),
              0.5, 1e-13);
}

TEST(Measurements, ExpectationOfShiftedBarenblatt) {
  const GridSpec g = sym_grid(100);
  const QuadratureWeights q = trapezoid_weights(g);
  const BarenblattParams p;
  const SpatialProfile shifted = barenblatt_profile(g, p, 0.1, 0.0);
  const double mass = oracles::refined_quadrature(
      [&](double x) { return barenblatt_value(x - 0.1, 0.0, p); }, -1.0, 1.0);
  const double want = oracles::refined_quadrature(
      [&](double x) { return x * barenblatt_value(x - 0.1, 0.0, p); }, -1.0,
      1.0);
  EXPECT_NEAR(want, 0.1 * mass, 1e-9);
  EXPECT_NEAR(observe_expectation(shifted, g, q), want, 2e-3);
}

TEST(Measurements, VarianceBasics) {
  GridSpec g01;
  g01.left = 0.0;
  g01.right = 1.0;
  g01.nx = 100;
  g01.nt = 4;
  const QuadratureWeights q01 = trapezoid_weights(g01);
  // flat density: int (x - 1/2)^2 dx = 1/12
  EXPECT_NEAR(observe_variance(SpatialProfile(g01.num_x(), 1.0), g01, q01),
              1.0 / 12.0, 1e-3);

  // near point mass at an interior node
  const GridSpec g = sym_grid(50);
  const QuadratureWeights q = trapezoid_weights(g);
  SpatialProfile hat(g.num_x(), 0.0);
  hat[25] = 1.0 / q.wx[25];
  EXPECT_NEAR(observe_variance(hat, g, q), 0.0, 1e-12);
}

TEST(Measurements, VarianceOfCenteredBarenblatt) {
  const GridSpec g = sym_grid(100);
  const QuadratureWeights q = trapezoid_weights(g);
  const BarenblattParams p;
  const SpatialProfile rho = barenblatt_profile(g, p);
  // frozen from the refined quadrature of int x^2 u_b(x,0) dx; the grid
  // value carries the O(dx^2) quadrature error of the kinked profile
  EXPECT_NEAR(observe_variance(rho, g, q), 0.02747314182127996, 3e-4);
}

TEST(Measurements, TranslationCovariance) {
  // with unit mass, shifting by one node moves B1 by dx and leaves B2 alone
  const GridSpec g = sym_grid(100);
  const QuadratureWeights q = trapezoid_weights(g);
  const BarenblattParams p;
  SpatialProfile a = barenblatt_profile(g, p, 0.0, 0.0);
  a = scale_to_mass(a, 1.0, q);
  SpatialProfile b(g.num_x(), 0.0);
  for (int j = 1; j < g.num_x(); ++j) b[j] = a[j - 1];  // interior support
  EXPECT_NEAR(observe_expectation(b, g, q) - observe_expectation(a, g, q),
              g.dx(), 1e-10);
  EXPECT_NEAR(observe_variance(b, g, q), observe_variance(a, g, q), 1e-10);
}

TEST(Measurements, ExpectationLinearity) {
  const GridSpec g = sym_grid(30);
  const QuadratureWeights q = trapezoid_weights(g);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  SpatialProfile a(g.num_x()), b(g.num_x());
  for (int j = 0; j < g.num_x(); ++j) {
    a[j] = d(rng);
    b[j] = d(rng);
  }
  SpatialProfile combo(g.num_x());
  for (int j = 0; j < g.num_x(); ++j) combo[j] = 1.7 * a[j] + 0.3 * b[j];
  EXPECT_NEAR(observe_expectation(combo, g, q),
              1.7 * observe_expectation(a, g, q) +
                  0.3 * observe_expectation(b, g, q),
              1e-12);
}

TEST(Measurements, ExpectationGradientIdentity) {
  const GridSpec g = sym_grid(20, 6);
  const QuadratureWeights q = trapezoid_weights(g);
  const StateField grad = grad_observe_expectation(g, q);
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.num_x(); ++j) ASSERT_DOUBLE_EQ(grad.rho_at(j, k), 0.0);
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const StateField u = oracles::random_field(rng, g);
    const double lhs = weighted_inner_product(grad, u, q);
    const double rhs = observe_expectation(u.rho_slice(g.nt), g, q);
    ASSERT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(Measurements, VarianceGradientCases) {
  const GridSpec g = sym_grid(24, 6);
  const QuadratureWeights q = trapezoid_weights(g);

  // zero profile: gradient entries are x_j^2 / wt_last
  const StateField zero = StateField::zeros(g);
  const StateField gz = grad_observe_variance(zero, g, q);
  for (int j = 0; j < g.num_x(); ++j)
    ASSERT_NEAR(gz.rho_at(j, g.nt), g.x(j) * g.x(j) / q.wt[g.nt], 1e-13);

  // unit-mass profile: centered term vanishes
  StateField u = StateField::zeros(g);
  SpatialProfile p(g.num_x());
  for (int j = 0; j < g.num_x(); ++j)
    p[j] = std::exp(-4.0 * g.x(j) * g.x(j));
  const double mass = discrete_mass(p, q);
  for (double& v : p) v /= mass;
  u.set_rho_slice(g.nt, p);
  const double mean = observe_expectation(p, g, q);
  const StateField gu = grad_observe_variance(u, g, q);
  for (int j = 0; j < g.num_x(); ++j) {
    const double d = g.x(j) - mean;
    ASSERT_NEAR(gu.rho_at(j, g.nt), d * d / q.wt[g.nt], 1e-10);
  }
}

TEST(Measurements, VarianceGradientFiniteDifferences) {
  const GridSpec g = sym_grid(18, 5);
  const QuadratureWeights q = trapezoid_weights(g);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.2, 1.2);
  StateField u = StateField::zeros(g);
  SpatialProfile p(g.num_x());
  for (double& v : p) v = dist(rng);
  u.set_rho_slice(g.nt, p);
  const StateField grad = grad_observe_variance(u, g, q);
  for (int rep = 0; rep < 10; ++rep) {
    const StateField dir = oracles::random_field(rng, g);
    auto eval = [&](double s) {
      StateField shifted = u;
      for (std::size_t i = 0; i < u.size(); ++i)
        shifted.rho[i] += s * dir.rho[i];
      return observe_variance(shifted.rho_slice(g.nt), g, q);
    };
    const double h = 1e-6;
    const double fd = (eval(h) - eval(-h)) / (2.0 * h);
    const double an = weighted_inner_product(grad, dir, q);
    ASSERT_NEAR(an, fd, 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST(Measurements, DataSequence) {
  const GridSpec g = sym_grid(100);
  const QuadratureWeights q = trapezoid_weights(g);
  const BarenblattParams p;
  auto truth = [&](double t) { return barenblatt_profile(g, p, 0.0, t); };
  const double tau = 5e-4;
  const auto data = make_data_sequence(truth, tau, 33, true, true, g, q);
  ASSERT_EQ(data.size(), 32u);
  for (const auto& v : data) {
    ASSERT_EQ(v.size(), 2u);
    ASSERT_NEAR(v[0], 0.0, 1e-12);  // centered truth
  }
  // variance of the truth at t = tau from refined quadrature
  const double want = oracles::refined_quadrature(
      [&](double x) { return x * x * barenblatt_value(x, tau, p); }, -1.0, 1.0);
  EXPECT_NEAR(data[0][1], want, 1e-3);  // grid quadrature error

  const auto again = make_data_sequence(truth, tau, 33, true, true, g, q);
  EXPECT_EQ(data, again);  // determinism

  const auto exp_only = make_data_sequence(truth, tau, 5, true, false, g, q);
  ASSERT_EQ(exp_only.size(), 4u);
  ASSERT_EQ(exp_only[0].size(), 1u);
}

TEST(Measurements, NoiseIsSeededAndOptional) {
  std::vector<std::vector<double>> data = {{1.0, 2.0}, {3.0, 4.0}};
  auto copy = data;
  add_observation_noise(copy, 0.0, 5);
  EXPECT_EQ(copy, data);
  auto n1 = data;
  auto n2 = data;
  add_observation_noise(n1, 0.1, 5);
  add_observation_noise(n2, 0.1, 5);
  EXPECT_EQ(n1, n2);
  EXPECT_NE(n1, data);
  auto n3 = data;
  add_observation_noise(n3, 0.1, 6);
  EXPECT_NE(n3, n1);
}
