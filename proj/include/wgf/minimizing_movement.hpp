#pragma once

#include <Eigen/Dense>
#include <functional>
#include <random>

namespace wgf::mm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// C^1 functional with analytic gradient and a known bound on sup|F|.
struct SmoothFunctional {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double sup_norm_bound = 0.0;
};

/// argmin_u F(u) + ||u - u_prev||^2 / (2 tau), solved by BFGS with
/// backtracking to gradient norm <= 1e-10. Throws std::runtime_error when the
/// tolerance is not reached within the iteration budget.
Vector mm_step(const Vector& u_prev, const SmoothFunctional& f, double tau);

/// || u_next - u_prev + tau grad F(u_next) ||_2
double implicit_euler_residual(const Vector& u_prev, const Vector& u_next,
                               const SmoothFunctional& f, double tau);

struct StabilityGap {
  double lhs = 0.0;  // || step(u1,F1) - step(u2,F2) ||^2
  double rhs = 0.0;  // 9 ||u1-u2||^2 + 8 tau delta_F + 4 tau (bound1 + bound2)
};

StabilityGap stability_gap(const SmoothFunctional& f1, const SmoothFunctional& f2,
                           const Vector& u1, const Vector& u2, double tau,
                           double delta_f);

/// argmin_u F(u) + ||u - u_prev||^2/(2 tau) + ||B u - v||^2/(2 tau theta).
/// The returned point satisfies the stationarity condition
///   u - u_prev + tau grad F(u) + (1/theta) B^T (B u - v) = 0
/// to 1e-8 (1 + ||u_prev||).
Vector nudged_step(const Vector& u_prev, const SmoothFunctional& f, double tau,
                   double theta, const Matrix& b, const Vector& v);

double nudged_residual(const Vector& u_prev, const Vector& u_next,
                       const SmoothFunctional& f, double tau, double theta,
                       const Matrix& b, const Vector& v);

/// Sum of Gaussian bumps and tanh ridges with analytically known sup-norm
/// bound and curvature below max_curvature, so the step objectives stay
/// strictly convex for the tau values used in the randomized suite.
SmoothFunctional random_bounded_functional(std::mt19937_64& rng, int dim,
                                           double max_curvature);

struct VerificationReport {
  int stability_total = 0;
  int stability_failures = 0;
  int euler_total = 0;
  int euler_failures = 0;
  int nudging_total = 0;
  int nudging_failures = 0;
  bool ok() const {
    return stability_failures == 0 && euler_failures == 0 &&
           nudging_failures == 0;
  }
};

/// Randomized suite: the stability inequality on 1000 instances
/// (d in {1,2,5}, tau in {1e-3,1e-2,1e-1}), the implicit-Euler residual on
/// 100 random convex quadratics, and the nudging identities.
VerificationReport run_verification_suite(unsigned seed);

}  // namespace wgf::mm
