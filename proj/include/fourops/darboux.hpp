#pragma once

#include "fourops/operator_l.hpp"

namespace fourops {

/// Pass from L = A*A + E0 to the partner operator AA* + E0, which drops the
/// doubly degenerate level E0:  u~ = u + 4f',  v~ = v + 2fg' - ff'' + f'''.
PotentialPair remove_eigenvalue(const PotentialPair& pp, const FactorizationData& fac,
                                DiffScheme scheme);

struct IsospectralityReport {
    std::vector<double> eigenvalues_L;
    std::vector<double> eigenvalues_L_tilde;
    bool e0_removed = false;       // E0 absent from the partner spectrum by margin
    bool others_match = false;     // remaining bound states shared
    double e0 = 0.0;
    double margin = 0.0;           // distance of the partner spectrum from E0
    double max_match_error = 0.0;  // worst relative mismatch among shared levels
};

IsospectralityReport removal_isospectrality_check(const PotentialPair& pp,
                                                  const PotentialPair& pp_tilde, double E0,
                                                  int k);

/// g = (3f' - f^2 - u) / 2  (the addition-side closure).
GridFunction g_from_f(const GridFunction& f, const GridFunction& u,
                      DiffScheme scheme = DiffScheme::analytic_passthrough);

/// Pointwise residual of the addition equation for W = 1/W_hat:
///   40 W'^4/W^4 - 2 W''''/W + 14 W''' W'/W^2 + 13 W''^2/W^2 - 64 W'' W'^2/W^3
///   + 2u'' + u^2 - 2u' W'/W + 2u (W'^2/W^2 - 2 (W'/W)') - 16 kappa^4 - 4v.
GridFunction addition_residual(const GridFunction& W, const PotentialPair& pp, double kappa,
                               DiffScheme scheme);

/// Dress the free operator with one doubly degenerate level -4 kappa^4:
/// returns the closed-form reflectionless pair and its factorization.
std::pair<PotentialPair, FactorizationData> add_eigenvalue_free(double kappa, const Grid& grid);

}  // namespace fourops
