#include "wgf/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wgf {

void GridSpec::validate() const {
  if (!(left < right))
    throw std::invalid_argument("GridSpec: left endpoint must be < right");
  if (nx < 1 || nt < 1)
    throw std::invalid_argument("GridSpec: nx and nt must be positive");
}

QuadratureWeights trapezoid_weights(const GridSpec& grid) {
  grid.validate();
  QuadratureWeights q;
  q.wx.assign(grid.num_x(), grid.dx());
  q.wx.front() *= 0.5;
  q.wx.back() *= 0.5;
  q.wt.assign(grid.num_t(), grid.dt());
  q.wt.front() *= 0.5;
  q.wt.back() *= 0.5;
  return q;
}

SpatialProfile StateField::rho_slice(int k) const {
  return SpatialProfile(rho.begin() + idx(0, k), rho.begin() + idx(0, k) + num_x);
}

void StateField::set_rho_slice(int k, const SpatialProfile& values) {
  if (static_cast<int>(values.size()) != num_x)
    throw std::invalid_argument("StateField: slice length mismatch");
  std::copy(values.begin(), values.end(), rho.begin() + idx(0, k));
}

namespace {

void check_shapes(const StateField& v, const QuadratureWeights& q) {
  if (v.num_x != static_cast<int>(q.wx.size()) ||
      v.num_t != static_cast<int>(q.wt.size()))
    throw std::invalid_argument("StateField does not match quadrature weights");
}

}  // namespace

double weighted_inner_product(const StateField& v, const StateField& w,
                              const QuadratureWeights& q) {
  if (!v.same_shape(w))
    throw std::invalid_argument("weighted_inner_product: shape mismatch");
  check_shapes(v, q);
  double total = 0.0;
  for (int k = 0; k < v.num_t; ++k) {
    double slice = 0.0;
    const std::size_t base = v.idx(0, k);
    for (int j = 0; j < v.num_x; ++j) {
      const std::size_t i = base + j;
      slice += q.wx[j] * (v.rho[i] * w.rho[i] + v.mom[i] * w.mom[i]);
    }
    total += q.wt[k] * slice;
  }
  return total;
}

double weighted_norm(const StateField& v, const QuadratureWeights& q) {
  return std::sqrt(weighted_inner_product(v, v, q));
}

StateField gramian_apply(const StateField& v, const QuadratureWeights& q) {
  check_shapes(v, q);
  StateField out = v;
  for (int k = 0; k < v.num_t; ++k) {
    const std::size_t base = v.idx(0, k);
    for (int j = 0; j < v.num_x; ++j) {
      const double w = q.wt[k] * q.wx[j];
      out.rho[base + j] *= w;
      out.mom[base + j] *= w;
    }
  }
  return out;
}

StateField gramian_solve(const StateField& v, const QuadratureWeights& q) {
  check_shapes(v, q);
  StateField out = v;
  for (int k = 0; k < v.num_t; ++k) {
    const std::size_t base = v.idx(0, k);
    for (int j = 0; j < v.num_x; ++j) {
      const double w = q.wt[k] * q.wx[j];
      out.rho[base + j] /= w;
      out.mom[base + j] /= w;
    }
  }
  return out;
}

double discrete_mass(const SpatialProfile& rho, const QuadratureWeights& q) {
  if (rho.size() != q.wx.size())
    throw std::invalid_argument("discrete_mass: profile length mismatch");
  double m = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) m += q.wx[j] * rho[j];
  return m;
}

}  // namespace wgf
