#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fourops/catalog.hpp"
#include "fourops/darboux.hpp"
#include "fourops/operator_l.hpp"

using namespace fourops;

namespace {

Grid test_grid() { return make_uniform_grid(-40.0, 40.0, 2001, false); }

PotentialPair free_pair(const Grid& g) {
    GridFunction z = sample(g, [](double) { return Jet(); });
    return make_potential_pair(z, z);
}

}  // namespace

TEST_CASE("free operator is non-negative") {
    Grid g = test_grid();
    SpectrumResult s = lowest_eigenpairs(assemble_L(free_pair(g)), 1);
    CHECK(s.eigenvalues[0] >= -1e-9);
    CHECK(s.eigenvalues[0] <= 1e-3);
}

TEST_CASE("assembled matrix rejects mismatched grids") {
    Grid g1 = test_grid();
    Grid g2 = make_uniform_grid(-40.0, 40.0, 1999, false);
    GridFunction u = sample(g1, [](double) { return Jet(); });
    GridFunction v = sample(g2, [](double) { return Jet(); });
    CHECK_THROWS_AS(make_potential_pair(u, v), GridMismatchError);
}

TEST_CASE("example 1: double eigenvalue at -4") {
    // the discretization splits the exact double level by O(h^4); the cluster
    // tolerance is only attained at the default resolution
    Grid g = make_uniform_grid(-40.0, 40.0, 4001, false);
    CatalogEntry e = example(1, g);
    SpectrumResult s = lowest_eigenpairs(assemble_L(e.pp), 3);
    CHECK(std::abs(s.eigenvalues[0] + 4.0) < 1e-3);
    CHECK(std::abs(s.eigenvalues[1] + 4.0) < 1e-3);
    CHECK(s.eigenvalues[2] >= -1e-2);
    REQUIRE(!s.degeneracy_groups.empty());
    CHECK(s.degeneracy_groups[0].size() == 2);

    // mutual orthonormality under grid quadrature
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) {
            const double ip = inner_product(s.eigenfunctions[i], s.eigenfunctions[j]);
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("example 2: double eigenvalue at -64") {
    Grid g = test_grid();
    CatalogEntry e = example(2, g);
    SpectrumResult s = lowest_eigenpairs(assemble_L(e.pp), 2);
    CHECK(std::abs(s.eigenvalues[0] + 64.0) < 1e-2 * 64.0);
    CHECK(std::abs(s.eigenvalues[1] + 64.0) < 1e-2 * 64.0);
}

TEST_CASE("degenerate pair splitting stays below the cluster tolerance") {
    Grid g = make_uniform_grid(-40.0, 40.0, 4001, false);
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        SpectrumResult s = lowest_eigenpairs(assemble_L(e.pp), 2);
        CHECK(std::abs(s.eigenvalues[0] - s.eigenvalues[1]) <
              1e-6 * std::max(1.0, std::abs(e.E0)));
    }
}

TEST_CASE("A annihilates the ground-state pair (analytic derivatives)") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        REQUIRE(e.fac.has_value());
        REQUIRE(e.psi_pair.has_value());
        CHECK(sup_norm(apply_A(*e.fac, e.psi_pair->first)) < 1e-6);
        CHECK(sup_norm(apply_A(*e.fac, e.psi_pair->second)) < 1e-6);
    }
}

TEST_CASE("A with f = g = 0 is minus the second derivative") {
    Grid g = test_grid();
    GridFunction z = sample(g, [](double) { return Jet(); });
    FactorizationData fac{z, z, 0.0, 0.0};
    GridFunction s = sample(g, [](double x) { return sin(Jet::variable(x)); });
    GridFunction As = apply_A(fac, s);
    GridFunction Astar_s = apply_A_star(fac, s);
    double err = 0.0, err2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
        err = std::max(err, std::abs(As.values[i] - std::sin(g.point(i))));
        err2 = std::max(err2, std::abs(As.values[i] - Astar_s.values[i]));
    }
    CHECK(err < 1e-12);
    CHECK(err2 < 1e-12);
}

TEST_CASE("adjointness of A and A* under quadrature") {
    Grid g = test_grid();
    CatalogEntry e = example(1, g);
    GridFunction psi = sample(g, [](double x) {
        return powi(sech(Jet::variable(x) - 1.0), 2);
    });
    GridFunction phi = sample(g, [](double x) {
        Jet X = Jet::variable(x);
        return powi(sech(X + 0.5), 3) * sin(X);
    });
    const double lhs = inner_product(apply_A(*e.fac, psi), phi);
    const double rhs = inner_product(psi, apply_A_star(*e.fac, phi));
    CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("adjointness converges at 4th order with finite differences") {
    GridFunction psi_c, phi_c;
    double prev_err = 0.0;
    std::vector<double> errs;
    for (int n : {501, 1001}) {
        Grid g = make_uniform_grid(-40.0, 40.0, n, false);
        CatalogEntry e = example(1, g);
        GridFunction psi = sample(g, [](double x) {
            return powi(sech(Jet::variable(x) - 1.0), 2);
        });
        GridFunction phi = sample(g, [](double x) {
            return powi(sech(Jet::variable(x) + 0.5), 3);
        });
        const double lhs = inner_product(apply_A(*e.fac, psi, DiffScheme::central_fd4), phi);
        const double rhs =
            inner_product(psi, apply_A_star(*e.fac, phi, DiffScheme::central_fd4));
        errs.push_back(std::abs(lhs - rhs));
        prev_err = errs.back();
    }
    (void)prev_err;
    // halving h must shrink the defect by at least ~2^3 (integrand is smooth,
    // expected rate is h^4 up to quadrature noise)
    if (errs[0] > 1e-13) CHECK(errs[1] < errs[0] / 8.0);
}

TEST_CASE("factorization residual for catalog data") {
    Grid g = test_grid();
    std::vector<GridFunction> probes;
    probes.push_back(sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); }));
    probes.push_back(sample(g, [](double x) {
        Jet X = Jet::variable(x);
        return sin(X) * powi(sech(X - 0.3), 2);
    }));

    CatalogEntry e1 = example(1, g);
    CHECK(factorization_residual(e1.pp, *e1.fac, probes) < 1e-5);

    CatalogEntry fol = follyton(0.5, g);
    CHECK(factorization_residual(fol.pp, *fol.fac, probes) < 1e-5);

    // free case: exact zero
    GridFunction z = sample(g, [](double) { return Jet(); });
    PotentialPair freepp = make_potential_pair(z, z);
    FactorizationData freefac{z, z, 0.0, 0.0};
    CHECK(factorization_residual(freepp, freefac, probes) < 1e-12);
}

TEST_CASE("example 4: simple ground state at 0 and A*A consistency on tanh") {
    Grid g = test_grid();
    CatalogEntry e = example(4, g);
    SpectrumResult s = lowest_eigenpairs(assemble_L(e.pp), 2);
    CHECK(std::abs(s.eigenvalues[0]) < 1e-3);
    // the level at 0 is simple: the next eigenvalue sits outside the cluster
    CHECK(s.eigenvalues[1] - s.eigenvalues[0] > cluster_tol(s.eigenvalues[0]));
    REQUIRE(s.degeneracy_groups[0].size() == 1);

    // tanh solves A psi = 0; A* A tanh then matches L tanh
    GridFunction th = sample(g, [](double x) { return tanh(Jet::variable(x)); });
    CHECK(sup_norm(apply_A(*e.fac, th)) < 1e-6);
    GridFunction AsA = apply_A_star(*e.fac, apply_A(*e.fac, th));
    GridFunction Lth = apply_L(e.pp, th);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(AsA.values[i] - Lth.values[i]));
    CHECK(err < 1e-6);
}
