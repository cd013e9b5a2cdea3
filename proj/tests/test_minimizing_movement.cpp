#include <gtest/gtest.h>

#include <random>

#include "wgf/minimizing_movement.hpp"

using namespace wgf::mm;

namespace {

SmoothFunctional zero_functional() {
  SmoothFunctional f;
  f.value = [](const Vector&) { return 0.0; };
  f.gradient = [](const Vector& u) -> Vector { return Vector::Zero(u.size()); };
  f.sup_norm_bound = 0.0;
  return f;
}

SmoothFunctional quadratic(const Matrix& q, const Vector& b) {
  SmoothFunctional f;
  f.value = [q, b](const Vector& u) { return 0.5 * u.dot(q * u) + b.dot(u); };
  f.gradient = [q, b](const Vector& u) -> Vector { return q * u + b; };
  f.sup_norm_bound = std::numeric_limits<double>::infinity();
  return f;
}

}  // namespace

TEST(MinimizingMovement, ZeroFunctionalIsIdentity) {
  Vector u(3);
  u << 1.0, -2.0, 0.5;
  const Vector next = mm_step(u, zero_functional(), 0.1);
  EXPECT_NEAR((next - u).norm(), 0.0, 1e-12);
  EXPECT_NEAR(implicit_euler_residual(u, next, zero_functional(), 0.1), 0.0,
              1e-12);
}

TEST(MinimizingMovement, IsotropicQuadraticClosedForm) {
  // F(u) = ||u||^2/2: step solves u + tau u = u_prev
  const int d = 4;
  const SmoothFunctional f = quadratic(Matrix::Identity(d, d), Vector::Zero(d));
  Vector u(d);
  u << 2.0, -1.0, 0.25, 3.0;
  const double tau = 0.3;
  const Vector next = mm_step(u, f, tau);
  EXPECT_NEAR((next - u / (1.0 + tau)).norm(), 0.0, 1e-10);
}

TEST(MinimizingMovement, RandomQuadraticMatchesLinearSolve) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const int dim = 1 + rep % 5;
    Matrix a = Matrix::NullaryExpr(dim, dim,
                                   [&](Eigen::Index, Eigen::Index) { return d(rng); });
    const Matrix q = a.transpose() * a + 0.2 * Matrix::Identity(dim, dim);
    const Vector b =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return d(rng); });
    const Vector u =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return 2.0 * d(rng); });
    const double tau = 0.05 + 0.1 * (rep % 3);
    const Vector got = mm_step(u, quadratic(q, b), tau);
    // (I + tau Q) u_next = u - tau b
    const Matrix lhs = Matrix::Identity(dim, dim) + tau * q;
    const Vector want = lhs.colPivHouseholderQr().solve(u - tau * b);
    ASSERT_NEAR((got - want).norm(), 0.0, 1e-9);
    ASSERT_LE(implicit_euler_residual(u, got, quadratic(q, b), tau),
              1e-8 * (1.0 + u.norm()));
    // the linear-solve oracle itself satisfies the optimality system exactly
    ASSERT_LE(implicit_euler_residual(u, want, quadratic(q, b), tau),
              1e-12 * (1.0 + u.norm()));
  }
}

TEST(MinimizingMovement, RandomBoundedFunctionalProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int dim = 1 + rep % 5;
    const SmoothFunctional f = random_bounded_functional(rng, dim, 8.0);
    for (int i = 0; i < 5; ++i) {
      const Vector u =
          Vector::NullaryExpr(dim, [&](Eigen::Index) { return d(rng); });
      ASSERT_LE(std::abs(f.value(u)), f.sup_norm_bound + 1e-12);
      // gradient matches finite differences
      const Vector g = f.gradient(u);
      for (int c = 0; c < dim; ++c) {
        Vector e = Vector::Zero(dim);
        e(c) = 1e-6;
        const double fd = (f.value(u + e) - f.value(u - e)) / 2e-6;
        ASSERT_NEAR(g(c), fd, 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST(MinimizingMovement, EulerResidualOnBoundedFunctionals) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int dim = 1 + rep % 3;
    const SmoothFunctional f = random_bounded_functional(rng, dim, 8.0);
    const Vector u =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return d(rng); });
    const double tau = 0.05;
    const Vector next = mm_step(u, f, tau);
    ASSERT_LE(implicit_euler_residual(u, next, f, tau), 1e-8 * (1.0 + u.norm()));
  }
}

TEST(MinimizingMovement, StabilityGapTrivialAndPerturbed) {
  std::mt19937_64 rng(3);
  const SmoothFunctional f = random_bounded_functional(rng, 2, 8.0);
  Vector u(2);
  u << 0.3, -0.4;
  const StabilityGap same = stability_gap(f, f, u, u, 0.05, 0.0);
  EXPECT_NEAR(same.lhs, 0.0, 1e-16);
  EXPECT_GE(same.rhs, 0.0);

  Vector u2(2);
  u2 << -0.5, 0.2;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    SmoothFunctional f2 = f;
    auto base_v = f.value;
    auto base_g = f.gradient;
    f2.value = [base_v, eps](const Vector& v) {
      return base_v(v) + eps * std::exp(-v.squaredNorm());
    };
    f2.gradient = [base_g, eps](const Vector& v) -> Vector {
      return base_g(v) - 2.0 * eps * std::exp(-v.squaredNorm()) * v;
    };
    f2.sup_norm_bound = f.sup_norm_bound + eps;
    const StabilityGap gap = stability_gap(f, f2, u, u2, 0.05, eps);
    ASSERT_LE(gap.lhs, gap.rhs);
  }
}

TEST(MinimizingMovement, NudgedStepLimits) {
  std::mt19937_64 rng(5);
  const int d = 3;
  const SmoothFunctional f = random_bounded_functional(rng, d, 8.0);
  Vector u(d);
  u << 0.5, -1.0, 0.25;
  Vector v(d);
  v << 0.0, 0.0, 0.0;
  const double tau = 0.05;
  // theta -> infinity: data term vanishes
  const Vector plain = mm_step(u, f, tau);
  const Vector weak = nudged_step(u, f, tau, 1e12, Matrix::Identity(d, d), v);
  EXPECT_NEAR((plain - weak).norm(), 0.0, 1e-6);
}

TEST(MinimizingMovement, NudgedWeightedAverage) {
  const int d = 2;
  Vector u(d), v(d);
  u << 1.0, -3.0;
  v << 0.5, 2.0;
  for (double theta : {0.1, 1.0, 10.0}) {
    const Vector got =
        nudged_step(u, zero_functional(), 0.05, theta, Matrix::Identity(d, d), v);
    const Vector want = (theta * u + v) / (theta + 1.0);
    ASSERT_NEAR((got - want).norm(), 0.0, 1e-12);
  }
}

TEST(MinimizingMovement, NudgedRandomQuadraticMatchesLinearSolve) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int dim = 1 + rep % 4;
    const int obs = 1 + rep % 2;
    Matrix a = Matrix::NullaryExpr(dim, dim,
                                   [&](Eigen::Index, Eigen::Index) { return d(rng); });
    const Matrix q = a.transpose() * a + 0.3 * Matrix::Identity(dim, dim);
    const Vector lin =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return d(rng); });
    const Matrix b = Matrix::NullaryExpr(
        obs, dim, [&](Eigen::Index, Eigen::Index) { return d(rng); });
    const Vector v =
        Vector::NullaryExpr(obs, [&](Eigen::Index) { return d(rng); });
    const Vector u =
        Vector::NullaryExpr(dim, [&](Eigen::Index) { return 2.0 * d(rng); });
    const double tau = 0.1, theta = 0.1;
    const Vector got = nudged_step(u, quadratic(q, lin), tau, theta, b, v);
    // stationarity: (I + tau Q + B^T B/theta) u = u_prev - tau lin + B^T v/theta
    const Matrix lhs = Matrix::Identity(dim, dim) + tau * q +
                       b.transpose() * b / theta;
    const Vector rhs = u - tau * lin + b.transpose() * v / theta;
    const Vector want = lhs.colPivHouseholderQr().solve(rhs);
    ASSERT_NEAR((got - want).norm(), 0.0, 1e-8);
    ASSERT_LE(nudged_residual(u, got, quadratic(q, lin), tau, theta, b, v),
              1e-8 * (1.0 + u.norm()));
  }
}

TEST(MinimizingMovement, VerificationSuitePasses) {
  const VerificationReport rep = run_verification_suite(7);
  EXPECT_EQ(rep.stability_total, 1000);
  EXPECT_EQ(rep.stability_failures, 0);
  EXPECT_EQ(rep.euler_total, 100);
  EXPECT_EQ(rep.euler_failures, 0);
  EXPECT_EQ(rep.nudging_failures, 0);
  EXPECT_TRUE(rep.ok());
}
