#pragma once

#include "wgf/grid.hpp"

namespace wgf {

/// Momentum on the first time slice is pinned to a constant: the divergence
/// stencil never reads it, so it is excluded from the prox sweep and from the
/// action sum. Pin value 0 contributes no transport cost; the alternative
/// constant 1 is kept behind this switch for cross-checking other conventions.
struct FirstSliceMomentum {
  bool pinned = true;
  double value = 0.0;
};

/// Kinetic density: m^2/(2 rho) for rho > 0, 0 at (0,0), +inf otherwise.
double action_density(double rho, double mom);

/// sum_{j,k} wt_k wx_j Phi(rho_jk, m_jk). The first-slice momentum is
/// replaced by 0 in the sum when pinned. May return +inf.
double discrete_action(const StateField& u, const QuadratureWeights& q,
                       const FirstSliceMomentum& pin = {});

/// Largest real root of P(x) = (x - rho)(x + lambda)^2 - (lambda/2) m^2,
/// computed from the depressed cubic in y = sqrt(x - rho). For m = 0 this is
/// max(rho, -lambda).
double cardano_largest_root(double rho, double mom, double lambda);

struct ProxPoint {
  double rho;
  double mom;
};

/// Pointwise prox of lambda*Phi: (rho*, rho* m/(rho* + lambda)) when the
/// largest root rho* is positive, (0,0) otherwise. Output density is >= 0.
ProxPoint prox_action_point(double rho, double mom, double lambda);

/// Applies prox_action_point at every grid point. Pinned first-slice momentum
/// entries keep their pin value and their densities are prox-ed with m = 0.
StateField prox_action_field(const StateField& u, double lambda,
                             const FirstSliceMomentum& pin = {});

/// In-place variant used by the solver loop; returns the minimum output
/// density (always >= 0).
double prox_action_into(const StateField& u, double lambda,
                        const FirstSliceMomentum& pin, StateField& out);

}  // namespace wgf
