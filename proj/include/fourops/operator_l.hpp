#pragma once

#include <vector>

#include "fourops/grid.hpp"

namespace fourops {

/// (u, v) defining L = d^4 + d u d + v, with the asymptotic constants the
/// potentials approach at the two ends of the line (0 for decaying data).
struct PotentialPair {
    GridFunction u;
    GridFunction v;
    double u_limit_left = 0.0;
    double u_limit_right = 0.0;
    double v_limit_left = 0.0;
    double v_limit_right = 0.0;

    bool decaying() const {
        return u_limit_left == 0.0 && u_limit_right == 0.0 && v_limit_left == 0.0 &&
               v_limit_right == 0.0;
    }
};

PotentialPair make_potential_pair(GridFunction u, GridFunction v, double u_left = 0.0,
                                  double u_right = 0.0, double v_left = 0.0,
                                  double v_right = 0.0);

/// (f, g, E0) with L - E0 = A*A, A = -d^2 + f d + g, E0 = -4 kappa^4.
struct FactorizationData {
    GridFunction f;
    GridFunction g;
    double E0 = 0.0;
    double kappa = 0.0;
};

/// Symmetric banded matrix in LAPACK lower band storage (column-major,
/// ab[(kd+1)*j + (i-j)] = A(i,j) for j <= i <= j+kd).
struct SymmetricOperatorMatrix {
    int n = 0;
    int kd = 0;
    std::vector<double> ab;
    Grid grid;

    double at(int i, int j) const;  // general accessor (symmetry applied)
};

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    std::vector<GridFunction> eigenfunctions;  // L2-normalized under grid quadrature
    std::vector<std::vector<int>> degeneracy_groups;
};

/// Relative tolerance used to cluster discrete eigenvalues that approximate
/// one degenerate level (discretization splits an exact double eigenvalue).
inline double cluster_tol(double lambda) {
    return 1e-6 * std::max(1.0, std::abs(lambda));
}

SymmetricOperatorMatrix assemble_L(const PotentialPair& pp);

SpectrumResult lowest_eigenpairs(const SymmetricOperatorMatrix& m, int k);

GridFunction apply_A(const FactorizationData& fac, const GridFunction& psi,
                     DiffScheme scheme = DiffScheme::analytic_passthrough);
GridFunction apply_A_star(const FactorizationData& fac, const GridFunction& psi,
                          DiffScheme scheme = DiffScheme::analytic_passthrough);

/// L psi = psi'''' + (u psi')' + v psi, with the chosen derivative scheme.
GridFunction apply_L(const PotentialPair& pp, const GridFunction& psi,
                     DiffScheme scheme = DiffScheme::analytic_passthrough);

/// Pointwise sup-norms of the two factorization identities
///   f' + f^2 + 2g + u          and   g^2 - (fg + g')' - v + E0.
std::pair<double, double> factorization_identity_residuals(const PotentialPair& pp,
                                                           const FactorizationData& fac,
                                                           DiffScheme scheme);

/// Max over probes of ||(A*A + E0) phi - L phi||_inf / ||phi||_inf, combined
/// with the identity residuals above.
double factorization_residual(const PotentialPair& pp, const FactorizationData& fac,
                              const std::vector<GridFunction>& probes,
                              DiffScheme scheme = DiffScheme::analytic_passthrough);

/// Quadrature inner product <a, b> on a shared grid.
double inner_product(const GridFunction& a, const GridFunction& b);

}  // namespace fourops
