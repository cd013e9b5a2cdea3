#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wgf/action.hpp"
#include "wgf/parallel.hpp"

using namespace wgf;

namespace {

GridSpec small_grid() {
  GridSpec g;
  g.left = 0.0;
  g.right = 1.0;
  g.nx = 4;
  g.nt = 3;
  return g;
}

double prox_objective(double r, double s, double rho, double mom, double lambda) {
  const double phi = action_density(r, s);
  return phi + ((r - rho) * (r - rho) + (s - mom) * (s - mom)) / (2.0 * lambda);
}

}  // namespace

TEST(Action, DensityCases) {
  EXPECT_DOUBLE_EQ(action_density(2.0, 4.0), 4.0);
  EXPECT_DOUBLE_EQ(action_density(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(action_density(0.0, 1.0)));
  EXPECT_TRUE(std::isinf(action_density(-0.5, 0.0)));
}

TEST(Action, DiscreteActionValues) {
  const GridSpec g = small_grid();
  const QuadratureWeights q = trapezoid_weights(g);
  StateField u = StateField::zeros(g);
  std::fill(u.rho.begin(), u.rho.end(), 1.0);
  EXPECT_DOUBLE_EQ(discrete_action(u, q), 0.0);

  u.rho_at(2, 1) = 2.0;
  u.mom_at(2, 1) = 4.0;
  // single interior contribution wt*wx*m^2/(2 rho)
  EXPECT_NEAR(discrete_action(u, q), q.wt[1] * q.wx[2] * 4.0, 1e-15);

  u.rho_at(1, 2) = 0.0;
  u.mom_at(1, 2) = 1.0;
  EXPECT_TRUE(std::isinf(discrete_action(u, q)));
}

TEST(Action, FirstSliceMomentumExcluded) {
  const GridSpec g = small_grid();
  const QuadratureWeights q = trapezoid_weights(g);
  StateField u = StateField::zeros(g);
  std::fill(u.rho.begin(), u.rho.end(), 1.0);
  for (int j = 0; j < g.num_x(); ++j) u.mom_at(j, 0) = 1.0;
  EXPECT_DOUBLE_EQ(discrete_action(u, q), 0.0);
  FirstSliceMomentum unpinned{false, 0.0};
  EXPECT_GT(discrete_action(u, q, unpinned), 0.0);
}

TEST(Action, CardanoTrivialCases) {
  EXPECT_DOUBLE_EQ(cardano_largest_root(3.0, 0.0, 0.2), 3.0);
  EXPECT_DOUBLE_EQ(cardano_largest_root(-0.5, 0.0, 0.2), -0.2);
  EXPECT_DOUBLE_EQ(cardano_largest_root(0.0, 0.0, 1.0), 0.0);
}

TEST(Action, CardanoAgreesWithBisection) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rho_d(-2.0, 2.0);
  std::uniform_real_distribution<double> mom_d(-3.0, 3.0);
  const double lambdas[] = {0.05, 0.2, 1.0};
  for (int i = 0; i < 1000; ++i) {
    const double rho = rho_d(rng);
    const double mom = mom_d(rng);
    const double lambda = lambdas[i % 3];
    const double got = cardano_largest_root(rho, mom, lambda);
    const double want = oracles::bisection_largest_root(rho, mom, lambda);
    ASSERT_NEAR(got, want, 1e-9) << "rho=" << rho << " m=" << mom
                                 << " lambda=" << lambda;
    // root property
    const double p = (got - rho) * (got + lambda) * (got + lambda) -
                     0.5 * lambda * mom * mom;
    ASSERT_NEAR(p, 0.0, 1e-9);
  }
}

TEST(Action, ProxPointCases) {
  const ProxPoint a = prox_action_point(0.0, 0.0, 0.7);
  EXPECT_DOUBLE_EQ(a.rho, 0.0);
  EXPECT_DOUBLE_EQ(a.mom, 0.0);

  const ProxPoint b = prox_action_point(1.3, 0.0, 0.7);
  EXPECT_DOUBLE_EQ(b.rho, 1.3);
  EXPECT_DOUBLE_EQ(b.mom, 0.0);

  // frozen from the bisection oracle: root of (x-1)(x+0.2)^2 = 0.1
  const ProxPoint c = prox_action_point(1.0, 1.0, 0.2);
  EXPECT_NEAR(c.rho, 1.0627173506037468, 1e-11);
  EXPECT_NEAR(c.mom, 0.8416114264175009, 1e-11);
  EXPECT_NEAR(c.mom, c.rho / (c.rho + 0.2), 1e-13);
}

TEST(Action, ProxMinimizesPointwiseObjective) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rho_d(-1.5, 2.0);
  std::uniform_real_distribution<double> mom_d(-2.0, 2.0);
  std::uniform_real_distribution<double> lam_d(0.05, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double rho = rho_d(rng);
    const double mom = mom_d(rng);
    const double lambda = lam_d(rng);
    const ProxPoint p = prox_action_point(rho, mom, lambda);
    const double opt = prox_objective(p.rho, p.mom, rho, mom, lambda);
    for (int i = 0; i <= 200; ++i) {
      const double r = 3.0 * i / 200.0;
      for (int k = 0; k <= 200; ++k) {
        const double s = -3.0 + 6.0 * k / 200.0;
        ASSERT_LE(opt, prox_objective(r, s, rho, mom, lambda) + 1e-7);
      }
    }
  }
}

TEST(Action, ProxFirmlyNonexpansiveSpotCheck) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const double lambda = 0.05 + 0.5 * std::abs(d(rng));
    const double x1 = d(rng), y1 = d(rng), x2 = d(rng), y2 = d(rng);
    const ProxPoint a = prox_action_point(x1, y1, lambda);
    const ProxPoint b = prox_action_point(x2, y2, lambda);
    const double dist_out = std::hypot(a.rho - b.rho, a.mom - b.mom);
    const double dist_in = std::hypot(x1 - x2, y1 - y2);
    ASSERT_LE(dist_out, dist_in + 1e-10);
  }
}

TEST(Action, FieldProxMatchesPointwiseLoop) {
  const GridSpec g = small_grid();
  std::mt19937_64 rng(3);
  const StateField u = oracles::random_field(rng, g, -1.0, 2.0);
  const StateField out = prox_action_field(u, 0.3);
  double min_rho = 1e300;
  for (int k = 0; k < g.num_t(); ++k)
    for (int j = 0; j < g.num_x(); ++j) {
      if (k == 0) {
        const ProxPoint p = prox_action_point(u.rho_at(j, 0), 0.0, 0.3);
        EXPECT_DOUBLE_EQ(out.rho_at(j, 0), p.rho);
        EXPECT_DOUBLE_EQ(out.mom_at(j, 0), 0.0);  // pin value
      } else {
        const ProxPoint p =
            prox_action_point(u.rho_at(j, k), u.mom_at(j, k), 0.3);
        EXPECT_DOUBLE_EQ(out.rho_at(j, k), p.rho);
        EXPECT_DOUBLE_EQ(out.mom_at(j, k), p.mom);
      }
      min_rho = std::min(min_rho, out.rho_at(j, k));
    }
  EXPECT_GE(min_rho, 0.0);
}

TEST(Action, FieldProxClampsNegativeDensity) {
  const GridSpec g = small_grid();
  StateField u = StateField::zeros(g);
  std::fill(u.rho.begin(), u.rho.end(), 0.5);
  u.rho_at(2, 2) = -0.4;
  const StateField out = prox_action_field(u, 0.25);
  EXPECT_DOUBLE_EQ(out.rho_at(2, 2), 0.0);
  EXPECT_DOUBLE_EQ(out.mom_at(2, 2), 0.0);
  EXPECT_DOUBLE_EQ(out.rho_at(1, 1), 0.5);
}

TEST(Action, PositivityForAllInputs) {
  GridSpec g;
  g.left = -1.0;
  g.right = 1.0;
  g.nx = 12;
  g.nt = 6;
  std::mt19937_64 rng(12345);
  for (int rep = 0; rep < 20; ++rep) {
    const StateField u = oracles::random_field(rng, g, -5.0, 5.0);
    const StateField out = prox_action_field(u, 0.01 + 0.2 * rep);
    for (double r : out.rho) ASSERT_GE(r, 0.0);
  }
}

TEST(Action, ParallelSweepMatchesSequential) {
  GridSpec g;
  g.left = -1.0;
  g.right = 1.0;
  g.nx = 40;
  g.nt = 12;
  std::mt19937_64 rng(321);
  const StateField u = oracles::random_field(rng, g, -2.0, 2.0);
  std::vector<double> seq(u.size()), par(u.size());
  auto sweep = [&](std::vector<double>& out, int workers) {
    parallel_for(static_cast<int>(u.size()), [&](int i) {
      out[i] = prox_action_point(u.rho[i], u.mom[i], 0.3).rho;
    }, workers);
  };
  sweep(seq, 1);
  sweep(par, 4);
  EXPECT_EQ(seq, par);  // entries are independent, so bit-identical
}
