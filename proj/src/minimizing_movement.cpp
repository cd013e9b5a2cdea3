#include "wgf/minimizing_movement.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace wgf::mm {

namespace {

// BFGS with backtracking line search on a smooth objective.
Vector minimize(const std::function<double(const Vector&)>& value,
                const std::function<Vector(const Vector&)>& gradient,
                const Vector& start, double grad_tol, int max_iters) {
  const int d = static_cast<int>(start.size());
  Vector x = start;
  Vector g = gradient(x);
  double fx = value(x);
  Matrix h_inv = Matrix::Identity(d, d);

  for (int it = 0; it < max_iters; ++it) {
    if (g.norm() <= grad_tol) return x;
    Vector dir = -(h_inv * g);
    if (dir.dot(g) >= 0.0) {  // lost curvature; restart from steepest descent
      h_inv = Matrix::Identity(d, d);
      dir = -g;
    }
    double step = 1.0;
    const double slope = g.dot(dir);
    // near the optimum the objective decrease drops below float resolution
    // long before the gradient does; the f_eps term keeps the search moving
    const double f_eps = 1e-15 * (std::abs(fx) + 1.0);
    Vector x_new;
    double f_new = fx;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = value(x_new);
      if (f_new <= fx + 1e-4 * step * slope + f_eps) break;
      step *= 0.5;
    }
    Vector g_new = gradient(x_new);
    const Vector s = x_new - x;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const Matrix sy_outer = s * y.transpose();
      const Matrix eye = Matrix::Identity(d, d);
      h_inv = (eye - sy_outer / sy) * h_inv * (eye - sy_outer.transpose() / sy) +
              s * s.transpose() / sy;
    }
    x = x_new;
    g = g_new;
    fx = f_new;
  }
  if (g.norm() <= grad_tol) return x;
  throw std::runtime_error("mm minimize: gradient tolerance " +
                           std::to_string(grad_tol) + " not reached, |g| = " +
                           std::to_string(g.norm()));
}

}  // namespace

Vector mm_step(const Vector& u_prev, const SmoothFunctional& f, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("mm_step: tau <= 0");
  auto value = [&](const Vector& u) {
    return f.value(u) + (u - u_prev).squaredNorm() / (2.0 * tau);
  };
  auto gradient = [&](const Vector& u) -> Vector {
    return f.gradient(u) + (u - u_prev) / tau;
  };
  return minimize(value, gradient, u_prev, 1e-10, 500);
}

double implicit_euler_residual(const Vector& u_prev, const Vector& u_next,
                               const SmoothFunctional& f, double tau) {
  return (u_next - u_prev + tau * f.gradient(u_next)).norm();
}

StabilityGap stability_gap(const SmoothFunctional& f1, const SmoothFunctional& f2,
                           const Vector& u1, const Vector& u2, double tau,
                           double delta_f) {
  const Vector n1 = mm_step(u1, f1, tau);
  const Vector n2 = mm_step(u2, f2, tau);
  StabilityGap gap;
  gap.lhs = (n1 - n2).squaredNorm();
  gap.rhs = 9.0 * (u1 - u2).squaredNorm() + 8.0 * tau * delta_f +
            4.0 * tau * (f1.sup_norm_bound + f2.sup_norm_bound);
  return gap;
}

Vector nudged_step(const Vector& u_prev, const SmoothFunctional& f, double tau,
                   double theta, const Matrix& b, const Vector& v) {
  if (tau <= 0.0 || theta <= 0.0)
    throw std::invalid_argument("nudged_step: tau and theta must be positive");
  auto value = [&](const Vector& u) {
    return f.value(u) + (u - u_prev).squaredNorm() / (2.0 * tau) +
           (b * u - v).squaredNorm() / (2.0 * tau * theta);
  };
  auto gradient = [&](const Vector& u) -> Vector {
    return f.gradient(u) + (u - u_prev) / tau +
           b.transpose() * (b * u - v) / (tau * theta);
  };
  return minimize(value, gradient, u_prev, 1e-10, 500);
}

double nudged_residual(const Vector& u_prev, const Vector& u_next,
                       const SmoothFunctional& f, double tau, double theta,
                       const Matrix& b, const Vector& v) {
  return (u_next - u_prev + tau * f.gradient(u_next) +
          b.transpose() * (b * u_next - v) / theta)
      .norm();
}

SmoothFunctional random_bounded_functional(std::mt19937_64& rng, int dim,
                                           double max_curvature) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const int n_bumps = 1 + static_cast<int>(unit(rng) * 3.0);
  const int n_ridges = static_cast<int>(unit(rng) * 2.0);

  struct Bump {
    Vector center;
    double amplitude;
    double width2;
  };
  struct Ridge {
    Vector direction;
    double amplitude;
    double offset;
  };
  auto bumps = std::make_shared<std::vector<Bump>>();
  auto ridges = std::make_shared<std::vector<Ridge>>();

  // Curvature budget: a bump contributes at most 2|a|/s^2, a tanh ridge at
  // most 0.77 |a| ||w||^2. Amplitudes are scaled so the total stays below
  // max_curvature.
  double budget = 0.0;
  double bound = 0.0;
  for (int i = 0; i < n_bumps; ++i) {
    Bump b;
    b.center = Vector::NullaryExpr(dim, [&](Eigen::Index) { return 2.0 * sym(rng); });
    b.width2 = 1.0 + unit(rng);
    b.amplitude = sym(rng);
    budget += 2.0 * std::abs(b.amplitude) / b.width2;
    bumps->push_back(b);
  }
  for (int i = 0; i < n_ridges; ++i) {
    Ridge r;
    r.direction = Vector::NullaryExpr(dim, [&](Eigen::Index) { return sym(rng); });
    r.offset = sym(rng);
    r.amplitude = sym(rng);
    budget += 0.77 * std::abs(r.amplitude) * r.direction.squaredNorm();
    ridges->push_back(r);
  }
  const double scale = budget > max_curvature ? max_curvature / budget : 1.0;
  for (auto& b : *bumps) {
    b.amplitude *= scale;
    bound += std::abs(b.amplitude);
  }
  for (auto& r : *ridges) {
    r.amplitude *= scale;
    bound += std::abs(r.amplitude);
  }

  SmoothFunctional f;
  f.sup_norm_bound = bound;
  f.value = [bumps, ridges](const Vector& u) {
    double total = 0.0;
    for (const auto& b : *bumps)
      total += b.amplitude * std::exp(-(u - b.center).squaredNorm() / b.width2);
    for (const auto& r : *ridges)
      total += r.amplitude * std::tanh(r.direction.dot(u) + r.offset);
    return total;
  };
  f.gradient = [bumps, ridges](const Vector& u) -> Vector {
    Vector g = Vector::Zero(u.size());
    for (const auto& b : *bumps) {
      const Vector d = u - b.center;
      g += b.amplitude * std::exp(-d.squaredNorm() / b.width2) *
           (-2.0 / b.width2) * d;
    }
    for (const auto& r : *ridges) {
      const double t = std::tanh(r.direction.dot(u) + r.offset);
      g += r.amplitude * (1.0 - t * t) * r.direction;
    }
    return g;
  };
  return f;
}

VerificationReport run_verification_suite(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  VerificationReport rep;

  const int dims[] = {1, 2, 5};
  const double taus[] = {1e-3, 1e-2, 1e-1};
  const double delta_fs[] = {0.0, 1e-3, 1e-2, 1e-1};
  for (int i = 0; i < 1000; ++i) {
    const int d = dims[i % 3];
    const double tau = taus[(i / 3) % 3];
    const double delta_f = delta_fs[(i / 9) % 4];
    // curvature < 1/tau_max keeps the step objective strictly convex
    SmoothFunctional f1 = random_bounded_functional(rng, d, 8.0);
    SmoothFunctional f2 = f1;
    if (delta_f > 0.0) {
      // add a bump of sup-norm <= delta_f; curvature margin stays intact
      std::mt19937_64 sub(rng());
      SmoothFunctional bump = random_bounded_functional(sub, d, 1.0);
      const double cap =
          bump.sup_norm_bound > 0.0 ? delta_f / bump.sup_norm_bound : 0.0;
      const double c = std::min(1.0, cap);
      auto base_v = f1.value;
      auto base_g = f1.gradient;
      f2.value = [base_v, bump, c](const Vector& u) {
        return base_v(u) + c * bump.value(u);
      };
      f2.gradient = [base_g, bump, c](const Vector& u) -> Vector {
        return base_g(u) + c * bump.gradient(u);
      };
      f2.sup_norm_bound = f1.sup_norm_bound + c * bump.sup_norm_bound;
    }
    Vector u1 = Vector::NullaryExpr(d, [&](Eigen::Index) { return 2.0 * sym(rng); });
    Vector u2 = u1 + Vector::NullaryExpr(d, [&](Eigen::Index) { return sym(rng); });
    const StabilityGap gap = stability_gap(f1, f2, u1, u2, tau, delta_f);
    ++rep.stability_total;
    if (gap.lhs > gap.rhs) ++rep.stability_failures;
  }

  for (int i = 0; i < 100; ++i) {
    const int d = dims[i % 3];
    Matrix a = Matrix::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) {
      return sym(rng);
    });
    Matrix qm = a.transpose() * a + 0.1 * Matrix::Identity(d, d);
    Vector lin = Vector::NullaryExpr(d, [&](Eigen::Index) { return sym(rng); });
    SmoothFunctional quad;
    quad.value = [qm, lin](const Vector& u) {
      return 0.5 * u.dot(qm * u) + lin.dot(u);
    };
    quad.gradient = [qm, lin](const Vector& u) -> Vector { return qm * u + lin; };
    quad.sup_norm_bound = std::numeric_limits<double>::infinity();
    Vector u0 = Vector::NullaryExpr(d, [&](Eigen::Index) { return 2.0 * sym(rng); });
    const double tau = taus[i % 3];
    const Vector next = mm_step(u0, quad, tau);
    ++rep.euler_total;
    if (implicit_euler_residual(u0, next, quad, tau) >
        1e-8 * (1.0 + u0.norm()))
      ++rep.euler_failures;
  }

  for (int i = 0; i < 50; ++i) {
    const int d = dims[i % 3];
    SmoothFunctional zero;
    zero.value = [](const Vector&) { return 0.0; };
    zero.gradient = [](const Vector& u) -> Vector { return Vector::Zero(u.size()); };
    zero.sup_norm_bound = 0.0;
    Vector u0 = Vector::NullaryExpr(d, [&](Eigen::Index) { return 2.0 * sym(rng); });
    Vector v = Vector::NullaryExpr(d, [&](Eigen::Index) { return 2.0 * sym(rng); });
    const double theta = 0.1 + std::abs(sym(rng));
    const Vector got =
        nudged_step(u0, zero, 0.05, theta, Matrix::Identity(d, d), v);
    const Vector want = (theta * u0 + v) / (theta + 1.0);
    ++rep.nudging_total;
    if ((got - want).norm() > 1e-10 * (1.0 + want.norm())) ++rep.nudging_failures;
  }
  return rep;
}

}  // namespace wgf::mm
