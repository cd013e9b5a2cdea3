#include "wgf/constraints.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wgf {

ConstraintSystem::ConstraintSystem(const GridSpec& grid,
                                   const QuadratureWeights& q,
                                   const SpatialProfile& rho0,
                                   const std::array<double, 4>& deltas)
    : grid_(grid), q_(q), deltas_(deltas) {
  grid_.validate();
  if (static_cast<int>(rho0.size()) != grid.num_x())
    throw std::invalid_argument("ConstraintSystem: rho0 length mismatch");
  for (double d : deltas_)
    if (d < 0.0) throw std::invalid_argument("ConstraintSystem: delta < 0");

  rows_[0] = grid.num_x() * grid.nt;
  rows_[1] = 2 * grid.num_t();
  rows_[2] = grid.nt;
  rows_[3] = grid.num_x();
  offsets_[0] = 0;
  for (int i = 1; i < 4; ++i) offsets_[i] = offsets_[i - 1] + rows_[i - 1];
  total_rows_ = offsets_[3] + rows_[3];

  sqrt_wx_.resize(q.wx.size());
  sqrt_wt_.resize(q.wt.size());
  for (std::size_t j = 0; j < q.wx.size(); ++j) sqrt_wx_[j] = std::sqrt(q.wx[j]);
  for (std::size_t k = 0; k < q.wt.size(); ++k) sqrt_wt_[k] = std::sqrt(q.wt[k]);

  b_.assign(total_rows_, 0.0);
  const double mass0 = discrete_mass(rho0, q);
  for (int k = 1; k <= grid.nt; ++k)
    b_[offset(Block::mass) + (k - 1)] = sqrt_wt_[k] * mass0;
  for (int j = 0; j < grid.num_x(); ++j)
    b_[offset(Block::initial) + j] = sqrt_wx_[j] * rho0[j];
}

ConstraintSystem ConstraintSystem::with_targets(
    const SpatialProfile& rho0_new) const {
  if (static_cast<int>(rho0_new.size()) != grid_.num_x())
    throw std::invalid_argument("with_targets: rho0 length mismatch");
  ConstraintSystem out = *this;
  const double mass0 = discrete_mass(rho0_new, q_);
  for (int k = 1; k <= grid_.nt; ++k)
    out.b_[offset(Block::mass) + (k - 1)] = sqrt_wt_[k] * mass0;
  for (int j = 0; j < grid_.num_x(); ++j)
    out.b_[offset(Block::initial) + j] = sqrt_wx_[j] * rho0_new[j];
  return out;
}

void ConstraintSystem::apply(const StateField& u, std::vector<double>& out) const {
  const int nxp = grid_.num_x();
  const int ntp = grid_.num_t();
  if (u.num_x != nxp || u.num_t != ntp)
    throw std::invalid_argument("ConstraintSystem::apply: shape mismatch");
  out.assign(total_rows_, 0.0);

  const double inv_dt = 1.0 / grid_.dt();
  const double inv_dx = 1.0 / grid_.dx();
  const double inv_2dx = 0.5 * inv_dx;

  // divergence rows, k = 2..nt+1 (1-based)
  double* div = out.data();
  for (int k = 1; k < ntp; ++k) {
    const std::size_t cur = u.idx(0, k);
    const std::size_t prev = u.idx(0, k - 1);
    const double swt = sqrt_wt_[k];
    double* row = div + static_cast<std::size_t>(k - 1) * nxp;
    row[0] = swt * sqrt_wx_[0] *
             ((u.rho[cur] - u.rho[prev]) * inv_dt +
              (u.mom[cur + 1] - u.mom[cur]) * inv_dx);
    for (int j = 1; j < nxp - 1; ++j) {
      row[j] = swt * sqrt_wx_[j] *
               ((u.rho[cur + j] - u.rho[prev + j]) * inv_dt +
                (u.mom[cur + j + 1] - u.mom[cur + j - 1]) * inv_2dx);
    }
    row[nxp - 1] = swt * sqrt_wx_[nxp - 1] *
                   ((u.rho[cur + nxp - 1] - u.rho[prev + nxp - 1]) * inv_dt +
                    (u.mom[cur + nxp - 1] - u.mom[cur + nxp - 2]) * inv_dx);
  }

  double* flux = out.data() + offset(Block::boundary_flux);
  for (int k = 0; k < ntp; ++k) {
    flux[k] = sqrt_wt_[k] * u.mom[u.idx(0, k)];
    flux[ntp + k] = sqrt_wt_[k] * u.mom[u.idx(nxp - 1, k)];
  }

  double* mass = out.data() + offset(Block::mass);
  for (int k = 1; k < ntp; ++k) {
    double m = 0.0;
    const std::size_t base = u.idx(0, k);
    for (int j = 0; j < nxp; ++j) m += q_.wx[j] * u.rho[base + j];
    mass[k - 1] = sqrt_wt_[k] * m;
  }

  double* init = out.data() + offset(Block::initial);
  for (int j = 0; j < nxp; ++j) init[j] = sqrt_wx_[j] * u.rho[j];
}

std::vector<double> ConstraintSystem::apply(const StateField& u) const {
  std::vector<double> out;
  apply(u, out);
  return out;
}

void ConstraintSystem::apply_adjoint(const std::vector<double>& phi,
                                     StateField& out) const {
  if (static_cast<int>(phi.size()) != total_rows_)
    throw std::invalid_argument("apply_adjoint: dual length mismatch");
  const int nxp = grid_.num_x();
  const int ntp = grid_.num_t();
  if (out.num_x != nxp || out.num_t != ntp) out = StateField(nxp, ntp);
  std::fill(out.rho.begin(), out.rho.end(), 0.0);
  std::fill(out.mom.begin(), out.mom.end(), 0.0);

  const double inv_dt = 1.0 / grid_.dt();
  const double inv_dx = 1.0 / grid_.dx();
  const double inv_2dx = 0.5 * inv_dx;

  // A^T phi, accumulated per column
  const double* div = phi.data();
  for (int k = 1; k < ntp; ++k) {
    const std::size_t cur = out.idx(0, k);
    const std::size_t prev = out.idx(0, k - 1);
    const double swt = sqrt_wt_[k];
    const double* row = div + static_cast<std::size_t>(k - 1) * nxp;
    {
      const double w = swt * sqrt_wx_[0] * row[0];
      out.rho[cur] += w * inv_dt;
      out.rho[prev] -= w * inv_dt;
      out.mom[cur + 1] += w * inv_dx;
      out.mom[cur] -= w * inv_dx;
    }
    for (int j = 1; j < nxp - 1; ++j) {
      const double w = swt * sqrt_wx_[j] * row[j];
      out.rho[cur + j] += w * inv_dt;
      out.rho[prev + j] -= w * inv_dt;
      out.mom[cur + j + 1] += w * inv_2dx;
      out.mom[cur + j - 1] -= w * inv_2dx;
    }
    {
      const double w = swt * sqrt_wx_[nxp - 1] * row[nxp - 1];
      out.rho[cur + nxp - 1] += w * inv_dt;
      out.rho[prev + nxp - 1] -= w * inv_dt;
      out.mom[cur + nxp - 1] += w * inv_dx;
      out.mom[cur + nxp - 2] -= w * inv_dx;
    }
  }

  const double* flux = phi.data() + offset(Block::boundary_flux);
  for (int k = 0; k < ntp; ++k) {
    out.mom[out.idx(0, k)] += sqrt_wt_[k] * flux[k];
    out.mom[out.idx(nxp - 1, k)] += sqrt_wt_[k] * flux[ntp + k];
  }

  const double* mass = phi.data() + offset(Block::mass);
  for (int k = 1; k < ntp; ++k) {
    const double w = sqrt_wt_[k] * mass[k - 1];
    const std::size_t base = out.idx(0, k);
    for (int j = 0; j < nxp; ++j) out.rho[base + j] += w * q_.wx[j];
  }

  const double* init = phi.data() + offset(Block::initial);
  for (int j = 0; j < nxp; ++j) out.rho[j] += sqrt_wx_[j] * init[j];

  // W^{-1}
  for (int k = 0; k < ntp; ++k) {
    const std::size_t base = out.idx(0, k);
    for (int j = 0; j < nxp; ++j) {
      const double inv_w = 1.0 / (q_.wt[k] * q_.wx[j]);
      out.rho[base + j] *= inv_w;
      out.mom[base + j] *= inv_w;
    }
  }
}

StateField ConstraintSystem::apply_adjoint(const std::vector<double>& phi) const {
  StateField out(grid_.num_x(), grid_.num_t());
  apply_adjoint(phi, out);
  return out;
}

std::vector<double> ConstraintSystem::project_onto_balls(
    const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != total_rows_)
    throw std::invalid_argument("project_onto_balls: length mismatch");
  std::vector<double> out = x;
  for (int i = 0; i < 4; ++i) {
    const int lo = offsets_[i];
    const int hi = lo + rows_[i];
    double nrm2 = 0.0;
    for (int r = lo; r < hi; ++r) {
      const double d = x[r] - b_[r];
      nrm2 += d * d;
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm > deltas_[i]) {
      const double scale = deltas_[i] / nrm;
      for (int r = lo; r < hi; ++r) out[r] = b_[r] + scale * (x[r] - b_[r]);
    }
  }
  return out;
}

std::vector<double> ConstraintSystem::prox_conjugate(
    const std::vector<double>& phi, double sigma) const {
  if (sigma <= 0.0) throw std::invalid_argument("prox_conjugate: sigma <= 0");
  std::vector<double> out = phi;
  prox_conjugate_inplace(out, sigma);
  return out;
}

void ConstraintSystem::prox_conjugate_inplace(std::vector<double>& phi,
                                              double sigma) const {
  // phi <- phi - sigma * proj(phi / sigma), blockwise
  for (int i = 0; i < 4; ++i) {
    const int lo = offsets_[i];
    const int hi = lo + rows_[i];
    double nrm2 = 0.0;
    for (int r = lo; r < hi; ++r) {
      const double d = phi[r] / sigma - b_[r];
      nrm2 += d * d;
    }
    const double nrm = std::sqrt(nrm2);
    if (nrm <= deltas_[i]) {
      for (int r = lo; r < hi; ++r) phi[r] = 0.0;
    } else {
      const double scale = deltas_[i] / nrm;
      for (int r = lo; r < hi; ++r) {
        const double proj = b_[r] + scale * (phi[r] / sigma - b_[r]);
        phi[r] -= sigma * proj;
      }
    }
  }
}

std::array<double, 4> ConstraintSystem::residual_norms(const StateField& u) const {
  const std::vector<double> au = apply(u);
  std::array<double, 4> res{};
  for (int i = 0; i < 4; ++i) {
    const int lo = offsets_[i];
    const int hi = lo + rows_[i];
    double nrm2 = 0.0;
    for (int r = lo; r < hi; ++r) {
      const double d = au[r] - b_[r];
      nrm2 += d * d;
    }
    res[i] = std::sqrt(nrm2);
  }
  return res;
}

double estimate_operator_norm(const ConstraintSystem& sys, int iters,
                              unsigned seed) {
  if (iters < 1) throw std::invalid_argument("estimate_operator_norm: iters < 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> psi(sys.total_rows());
  for (double& v : psi) v = gauss(rng);

  StateField tmp(sys.grid().num_x(), sys.grid().num_t());
  std::vector<double> next;
  double est = 0.0;
  int stall = 0;
  for (int it = 0; it < iters; ++it) {
    double nrm = 0.0;
    for (double v : psi) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (double& v : psi) v /= nrm;
    sys.apply_adjoint(psi, tmp);
    sys.apply(tmp, next);
    double out = 0.0;
    for (double v : next) out += v * v;
    out = std::sqrt(out);
    // ratios ||M^{k+1}x|| / ||M^k x|| are nondecreasing for symmetric
    // positive semidefinite M, so the estimate never overshoots
    if (std::abs(out - est) <= 1e-13 * std::max(1.0, out)) {
      if (++stall >= 3) {
        est = out;
        break;
      }
    } else {
      stall = 0;
    }
    est = out;
    psi.swap(next);
  }
  return est;
}

}  // namespace wgf
