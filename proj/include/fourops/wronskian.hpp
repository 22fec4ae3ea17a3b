#pragma once

#include <utility>

#include "fourops/operator_l.hpp"

namespace fourops {

/// The determinants W, W12, W23 built from a ground-state pair:
///   W   = psi+ psi-'  - psi- psi+'
///   W12 = psi+' psi-'' - psi+'' psi-'
///   W23 = psi+'' psi-''' - psi+''' psi-''
struct WronskianSet {
    GridFunction W;
    GridFunction W12;
    GridFunction W23;
};

WronskianSet wronskians(const GridFunction& psi_plus, const GridFunction& psi_minus,
                        DiffScheme scheme);

/// True iff W never vanishes (min |W| above the guard) and never changes sign.
bool check_wronskian_positive(const WronskianSet& ws);

/// f = W'/W, g = -W12/W.
std::pair<GridFunction, GridFunction> factor_from_wronskian(const WronskianSet& ws,
                                                            DiffScheme scheme =
                                                                DiffScheme::analytic_passthrough);

/// u = (2 W12 - W'')/W,  v = E0 + W12^2/W^2 + (W12'/W)'.
PotentialPair potentials_from_wronskian(const WronskianSet& ws, double E0,
                                        DiffScheme scheme = DiffScheme::analytic_passthrough);

/// Pointwise residual of W W23 - (W12' W' - W12 W'' + W12^2).
GridFunction w23_cross_check_residual(const WronskianSet& ws,
                                      DiffScheme scheme = DiffScheme::analytic_passthrough);

/// Pointwise residual of 4(v - E0) = (W''/W + u)^2 + 2 (W'''/W + u' + u W'/W)'.
GridFunction hirota_residual(const GridFunction& W, const PotentialPair& pp, double E0,
                             DiffScheme scheme);

/// phi± = psi± / sqrt(W); the returned pair has unit Wronskian.
std::pair<GridFunction, GridFunction> liouville_pair(const GridFunction& psi_plus,
                                                     const GridFunction& psi_minus,
                                                     const GridFunction& W,
                                                     DiffScheme scheme =
                                                         DiffScheme::analytic_passthrough);

}  // namespace fourops
