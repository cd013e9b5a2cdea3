#include "wgf/action.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "wgf/parallel.hpp"

namespace wgf {

double action_density(double rho, double mom) {
  if (rho > 0.0) return mom * mom / (2.0 * rho);
  if (rho == 0.0 && mom == 0.0) return 0.0;
  return std::numeric_limits<double>::infinity();
}

double discrete_action(const StateField& u, const QuadratureWeights& q,
                       const FirstSliceMomentum& pin) {
  if (u.num_x != static_cast<int>(q.wx.size()) ||
      u.num_t != static_cast<int>(q.wt.size()))
    throw std::invalid_argument("discrete_action: shape mismatch");
  double total = 0.0;
  for (int k = 0; k < u.num_t; ++k) {
    double slice = 0.0;
    const std::size_t base = u.idx(0, k);
    for (int j = 0; j < u.num_x; ++j) {
      const double m = (k == 0 && pin.pinned) ? 0.0 : u.mom[base + j];
      slice += q.wx[j] * action_density(u.rho[base + j], m);
    }
    total += q.wt[k] * slice;
  }
  return total;
}

namespace {

// Monotone bisection for z (z+p)^2 = c on z >= max(0,-p). Only reached when
// the Cardano expression is ill-conditioned (|C| ~ 0).
double bisect_branch_root(double p, double c) {
  double lo = std::max(0.0, -p);
  double hi = lo + std::cbrt(c) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = mid * (mid + p) * (mid + p) - c;
    (val < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-16 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double cardano_largest_root(double rho, double mom, double lambda) {
  const double c = 0.5 * lambda * mom * mom;
  if (c == 0.0) return std::max(rho, -lambda);

  // z = x - rho solves z (z+p)^2 = c with p = rho + lambda; substituting
  // y = sqrt(z) gives the depressed cubic y^3 + p y + q = 0, q = -sqrt(c),
  // whose unique nonnegative real root y* yields x = y*^2 + rho.
  const double p = rho + lambda;
  const double q = -std::sqrt(c);
  const std::complex<double> disc(std::pow(p / 3.0, 3) + 0.25 * q * q, 0.0);
  const std::complex<double> croot = std::pow(-0.5 * q + std::sqrt(disc), 1.0 / 3.0);
  if (std::abs(croot) < 1e-14)
    return bisect_branch_root(p, c) + rho;

  const std::complex<double> xi1(-0.5, 0.8660254037844386467637232);
  const std::complex<double> xi2 = std::conj(xi1);
  const std::complex<double> roots[3] = {
      croot - p / (3.0 * croot),
      xi1 * croot - p / (3.0 * xi1 * croot),
      xi2 * croot - p / (3.0 * xi2 * croot)};

  // Exactly one root is real and nonnegative; pick it by sign, tolerating
  // complex-arithmetic noise in the imaginary part.
  double best = -1.0;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) > 1e-12 * std::max(1.0, std::abs(r.real()))) continue;
    if (r.real() >= 0.0 && r.real() > best) best = r.real();
  }
  if (best < 0.0)  // noise swallowed every candidate
    return bisect_branch_root(p, c) + rho;

  // One Newton step on y^3 + p y + q sharpens the cube-root rounding.
  const double f = best * best * best + p * best + q;
  const double df = 3.0 * best * best + p;
  if (df != 0.0) {
    const double y = best - f / df;
    if (y >= 0.0) best = y;
  }
  return best * best + rho;
}

ProxPoint prox_action_point(double rho, double mom, double lambda) {
  const double root = cardano_largest_root(rho, mom, lambda);
  if (root > 0.0) return {root, root * mom / (root + lambda)};
  return {0.0, 0.0};
}

double prox_action_into(const StateField& u, double lambda,
                        const FirstSliceMomentum& pin, StateField& out) {
  if (!u.same_shape(out)) out = StateField(u.num_x, u.num_t);
  const int nxp = u.num_x;
  std::vector<double> slice_min(u.num_t, 0.0);
  parallel_for(u.num_t, [&](int k) {
    const std::size_t base = u.idx(0, k);
    double mn = std::numeric_limits<double>::infinity();
    if (k == 0 && pin.pinned) {
      for (int j = 0; j < nxp; ++j) {
        const ProxPoint p = prox_action_point(u.rho[base + j], 0.0, lambda);
        out.rho[base + j] = p.rho;
        out.mom[base + j] = pin.value;
        mn = std::min(mn, p.rho);
      }
    } else {
      for (int j = 0; j < nxp; ++j) {
        const ProxPoint p =
            prox_action_point(u.rho[base + j], u.mom[base + j], lambda);
        out.rho[base + j] = p.rho;
        out.mom[base + j] = p.mom;
        mn = std::min(mn, p.rho);
      }
    }
    slice_min[k] = mn;
  });
  return *std::min_element(slice_min.begin(), slice_min.end());
}

StateField prox_action_field(const StateField& u, double lambda,
                             const FirstSliceMomentum& pin) {
  StateField out(u.num_x, u.num_t);
  prox_action_into(u, lambda, pin, out);
  return out;
}

}  // namespace wgf
