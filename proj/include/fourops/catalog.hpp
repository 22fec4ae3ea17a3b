#pragma once

#include <optional>
#include <string>

#include "fourops/closed_form.hpp"
#include "fourops/operator_l.hpp"

namespace fourops {

/// A fully specified closed-form fixture: potentials with analytic
/// derivatives, the known spectrum data, and (where the source displays them)
/// the factorization, Wronskians, ground-state pair, partner operator and Q.
struct CatalogEntry {
    std::string name;
    PotentialPair pp;
    double E0 = 0.0;
    double kappa = 0.0;
    bool degenerate = false;

    std::optional<std::pair<GridFunction, GridFunction>> psi_pair;
    bool psi_pair_normalizable = true;  // Example 4 stores the kernel pair (sech, tanh)
    std::optional<std::pair<GridFunction, GridFunction>> wronskian_closed_form;  // (W, W12)
    std::optional<FactorizationData> fac;
    std::optional<PotentialPair> expected_tilde;
    std::optional<double> expected_Q;
    std::optional<double> expected_Q_tilde;

    ClosedForm u_form, v_form;  // serializable description of (u, v)
};

/// Examples 1..5. k_param is required (and must be > 0) only for n = 5.
CatalogEntry example(int n, const Grid& grid, std::optional<double> k_param = std::nullopt);

/// The one-level reflectionless family conjugate to the free operator.
CatalogEntry follyton(double kappa, const Grid& grid);

/// chi(x) = 1/(sqrt(2) + cosh x).
double chi(double x);

/// Max residual over the grid of the four closed-form chi derivative
/// identities (chi'', chi'^2, chi''', chi'''') evaluated with exact jets.
double chi_identity_residuals(const Grid& grid);

}  // namespace fourops
