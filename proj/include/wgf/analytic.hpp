#pragma once

#include "wgf/grid.hpp"

namespace wgf {

struct BarenblattParams {
  double m = 2.0;
  double c = 0.5723571212766659;  // cbrt(3/16)
  double t0 = 1e-3;

  void validate() const;
};

/// u_b(x,t) = (t+t0)^{-1/(m+1)} (C - (m-1)/(2m(m+1)) x^2 (t+t0)^{-2/(m+1)})_+^{1/(m-1)}
double barenblatt_value(double x, double t, const BarenblattParams& p);

/// Half-width of the support at time t.
double barenblatt_support_radius(const BarenblattParams& p, double t);

/// Samples u_b(x_j - x_shift, t_shift) at the grid nodes.
SpatialProfile barenblatt_profile(const GridSpec& grid, const BarenblattParams& p,
                                  double x_shift = 0.0, double t_shift = 0.0);

/// rho0(x) = G(x - 1/3) + G(x + 1/3), G(x) = exp(-x^2/eta^2) / (2 pi eta^2)
SpatialProfile two_bump_profile(const GridSpec& grid, double eta);

struct MassResult {
  double mass = 0.0;
  bool support_truncated = false;  // support at t=0 sticks out of the domain
};

/// Trapezoid mass of the t = 0 profile on the grid.
MassResult barenblatt_mass(const BarenblattParams& p, const GridSpec& grid,
                           const QuadratureWeights& q);

}  // namespace wgf
