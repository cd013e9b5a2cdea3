#pragma once

#include <cstddef>
#include <vector>

namespace wgf {

/// Uniform space-time grid on [left,right] x [0,1] with nx spatial and nt
/// temporal intervals. File formats and documentation use the 1-based node
/// indices (j,k); all internal indices are 0-based.
struct GridSpec {
  double left = 0.0;
  double right = 1.0;
  int nx = 1;
  int nt = 1;

  double dx() const { return (right - left) / nx; }
  double dt() const { return 1.0 / nt; }
  int num_x() const { return nx + 1; }
  int num_t() const { return nt + 1; }
  double x(int j) const { return left + j * dx(); }
  double t(int k) const { return k * dt(); }

  /// Throws std::invalid_argument on an empty interval or nonpositive counts.
  void validate() const;
};

/// Composite trapezoidal weights. wx sums to (right-left), wt sums to 1.
struct QuadratureWeights {
  std::vector<double> wx;
  std::vector<double> wt;
};

QuadratureWeights trapezoid_weights(const GridSpec& grid);

/// One time slice of the density.
using SpatialProfile = std::vector<double>;

/// Density/momentum pair on the space-time grid. Time slices are stored
/// contiguously: entry (j,k) lives at k*num_x + j.
struct StateField {
  int num_x = 0;
  int num_t = 0;
  std::vector<double> rho;
  std::vector<double> mom;

  StateField() = default;
  StateField(int nxp, int ntp)
      : num_x(nxp),
        num_t(ntp),
        rho(static_cast<std::size_t>(nxp) * ntp, 0.0),
        mom(static_cast<std::size_t>(nxp) * ntp, 0.0) {}

  static StateField zeros(const GridSpec& g) {
    return StateField(g.num_x(), g.num_t());
  }

  std::size_t size() const { return rho.size(); }
  std::size_t idx(int j, int k) const {
    return static_cast<std::size_t>(k) * num_x + j;
  }
  double& rho_at(int j, int k) { return rho[idx(j, k)]; }
  double rho_at(int j, int k) const { return rho[idx(j, k)]; }
  double& mom_at(int j, int k) { return mom[idx(j, k)]; }
  double mom_at(int j, int k) const { return mom[idx(j, k)]; }

  SpatialProfile rho_slice(int k) const;
  void set_rho_slice(int k, const SpatialProfile& values);
  bool same_shape(const StateField& other) const {
    return num_x == other.num_x && num_t == other.num_t;
  }
};

/// <v,w> = sum_k sum_j wt_k wx_j (rho_v rho_w + mom_v mom_w)
double weighted_inner_product(const StateField& v, const StateField& w,
                              const QuadratureWeights& q);

double weighted_norm(const StateField& v, const QuadratureWeights& q);

/// Entrywise multiplication by wt_k*wx_j in both channels.
StateField gramian_apply(const StateField& v, const QuadratureWeights& q);

/// Entrywise division by wt_k*wx_j; exact inverse of gramian_apply.
StateField gramian_solve(const StateField& v, const QuadratureWeights& q);

/// sum_j wx_j rho_j
double discrete_mass(const SpatialProfile& rho, const QuadratureWeights& q);

}  // namespace wgf
