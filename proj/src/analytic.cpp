#include "wgf/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace wgf {

void BarenblattParams::validate() const {
  if (!(m > 1.0))
    throw std::invalid_argument("BarenblattParams: m must be > 1");
  if (!(c > 0.0) || !(t0 > 0.0))
    throw std::invalid_argument("BarenblattParams: c and t0 must be positive");
}

double barenblatt_value(double x, double t, const BarenblattParams& p) {
  const double s = t + p.t0;
  const double coef = (p.m - 1.0) / (2.0 * p.m * (p.m + 1.0));
  const double inner = p.c - coef * x * x * std::pow(s, -2.0 / (p.m + 1.0));
  if (inner <= 0.0) return 0.0;
  return std::pow(s, -1.0 / (p.m + 1.0)) * std::pow(inner, 1.0 / (p.m - 1.0));
}

double barenblatt_support_radius(const BarenblattParams& p, double t) {
  const double s = t + p.t0;
  const double coef = (p.m - 1.0) / (2.0 * p.m * (p.m + 1.0));
  return std::sqrt(p.c / coef) * std::pow(s, 1.0 / (p.m + 1.0));
}

SpatialProfile barenblatt_profile(const GridSpec& grid, const BarenblattParams& p,
                                  double x_shift, double t_shift) {
  p.validate();
  if (t_shift + p.t0 <= 0.0)
    throw std::invalid_argument("barenblatt_profile: t_shift + t0 <= 0");
  SpatialProfile out(grid.num_x());
  for (int j = 0; j < grid.num_x(); ++j)
    out[j] = barenblatt_value(grid.x(j) - x_shift, t_shift, p);
  return out;
}

SpatialProfile two_bump_profile(const GridSpec& grid, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("two_bump_profile: eta <= 0");
  const double norm = 1.0 / (2.0 * M_PI * eta * eta);
  auto bump = [&](double x) { return norm * std::exp(-x * x / (eta * eta)); };
  SpatialProfile out(grid.num_x());
  for (int j = 0; j < grid.num_x(); ++j) {
    const double x = grid.x(j);
    out[j] = bump(x - 1.0 / 3.0) + bump(x + 1.0 / 3.0);
  }
  return out;
}

MassResult barenblatt_mass(const BarenblattParams& p, const GridSpec& grid,
                           const QuadratureWeights& q) {
  p.validate();
  MassResult res;
  const double radius = barenblatt_support_radius(p, 0.0);
  res.support_truncated = (-radius < grid.left) || (radius > grid.right);
  res.mass = discrete_mass(barenblatt_profile(grid, p), q);
  return res;
}

}  // namespace wgf
