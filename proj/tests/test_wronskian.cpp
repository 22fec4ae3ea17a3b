#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fourops/catalog.hpp"
#include "fourops/wronskian.hpp"

using namespace fourops;

namespace {

Grid test_grid() { return make_uniform_grid(-40.0, 40.0, 2001, false); }

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double err = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        err = std::max(err, std::abs(a.values[i] - b.values[i]));
    return err;
}

}  // namespace

TEST_CASE("wronskians of the displayed pairs match their closed forms") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        REQUIRE(e.psi_pair.has_value());
        REQUIRE(e.wronskian_closed_form.has_value());
        WronskianSet ws =
            wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
        CHECK(sup_diff(ws.W, e.wronskian_closed_form->first) < 1e-10);
        CHECK(sup_diff(ws.W12, e.wronskian_closed_form->second) < 1e-10);
        CHECK(check_wronskian_positive(ws));
    }
}

TEST_CASE("factor functions recovered from the wronskians") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        WronskianSet ws =
            wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
        auto [f, gg] = factor_from_wronskian(ws);
        CHECK(sup_diff(f, e.fac->f) < 1e-8);
        CHECK(sup_diff(gg, e.fac->g) < 1e-8);
    }
}

TEST_CASE("potentials recovered from the wronskians") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        WronskianSet ws =
            wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
        PotentialPair rec = potentials_from_wronskian(ws, e.E0);
        CHECK(sup_diff(rec.u, e.pp.u) < 1e-8);
        CHECK(sup_diff(rec.v, e.pp.v) < 1e-8);
    }
}

TEST_CASE("oscillatory pair with slow decay (k-family)") {
    Grid g = test_grid();
    for (double k : {1.0, 2.0, 3.0}) {
        CatalogEntry e = example(5, g, k);
        REQUIRE(e.psi_pair.has_value());
        WronskianSet ws =
            wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
        // W = sech(x/k)^(2k): the oscillations cancel exactly
        double err = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double w_exact = std::pow(1.0 / std::cosh(g.point(i) / k), 2.0 * k);
            err = std::max(err, std::abs(ws.W.values[i] - w_exact));
        }
        CHECK(err < 1e-10);
        CHECK(check_wronskian_positive(ws));

        PotentialPair rec = potentials_from_wronskian(ws, e.E0);
        CHECK(sup_diff(rec.u, e.pp.u) < 1e-7);
        CHECK(sup_diff(rec.v, e.pp.v) < 1e-7);
    }
}

TEST_CASE("third-order wronskian cross identity") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        WronskianSet ws =
            wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
        CHECK(sup_norm(w23_cross_check_residual(ws)) < 1e-8);
        // third derivatives through FD: truncation error dominates
        CHECK(sup_norm(w23_cross_check_residual(ws, DiffScheme::central_fd4)) < 1e-2);
    }
}

TEST_CASE("bilinear residual vanishes on catalog data") {
    Grid g = test_grid();
    for (int n : {1, 2}) {
        CatalogEntry e = example(n, g);
        GridFunction W = e.wronskian_closed_form->first;
        CHECK(sup_norm(hirota_residual(W, e.pp, e.E0, DiffScheme::analytic_passthrough)) < 1e-8);
    }
    CatalogEntry fol = follyton(0.5, g);
    REQUIRE(fol.wronskian_closed_form.has_value());
    CHECK(sup_norm(hirota_residual(fol.wronskian_closed_form->first, fol.pp, fol.E0,
                                   DiffScheme::analytic_passthrough)) < 1e-8);
}

TEST_CASE("normalized pair has unit wronskian") {
    Grid g = test_grid();
    CatalogEntry e = example(1, g);
    WronskianSet ws =
        wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::analytic_passthrough);
    auto [phi_p, phi_m] = liouville_pair(e.psi_pair->first, e.psi_pair->second, ws.W);
    WronskianSet unit = wronskians(phi_p, phi_m, DiffScheme::analytic_passthrough);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(unit.W.values[i] - 1.0));
    CHECK(err < 1e-8);
}

TEST_CASE("a dependent pair is rejected") {
    Grid g = test_grid();
    GridFunction p = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); });
    GridFunction q = sample(g, [](double x) { return 2.0 * powi(sech(Jet::variable(x)), 2); });
    CHECK_THROWS_AS(wronskians(p, q, DiffScheme::analytic_passthrough), LinearDependenceError);
}

TEST_CASE("sign-changing wronskian fails the positivity check") {
    Grid g = test_grid();
    GridFunction p = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); });
    GridFunction q = sample(g, [](double x) {
        Jet X = Jet::variable(x);
        return sinh(X) * powi(sech(X), 3);
    });
    // this pair has W changing sign at the origin? build and inspect honestly:
    WronskianSet ws = wronskians(q, p, DiffScheme::analytic_passthrough);
    bool sign_change = false;
    for (int i = 1; i < g.n; ++i)
        if (ws.W.values[i] * ws.W.values[i - 1] < 0.0) sign_change = true;
    if (sign_change) CHECK(!check_wronskian_positive(ws));
    // a function hitting zero also fails
    WronskianSet fake{sample(g, [](double x) { return tanh(Jet::variable(x)); }), ws.W12, ws.W23};
    CHECK(!check_wronskian_positive(fake));
}

TEST_CASE("factor functions are invariant under basis rotation and scaling") {
    Grid g = test_grid();
    CatalogEntry e = example(2, g);
    // same scheme on both sides so the comparison isolates the basis change
    WronskianSet base =
        wronskians(e.psi_pair->first, e.psi_pair->second, DiffScheme::central_fd4);
    auto [f0, g0] = factor_from_wronskian(base, DiffScheme::central_fd4);

    const double th = 0.6, c = 1.7;
    const GridFunction& pp_ = e.psi_pair->first;
    const GridFunction& pm_ = e.psi_pair->second;
    GridFunction rp = pointwise(g, {&pp_, &pm_}, [th, c](const std::vector<double>& v) {
        return c * (std::cos(th) * v[0] - std::sin(th) * v[1]);
    });
    GridFunction rm = pointwise(g, {&pp_, &pm_}, [th, c](const std::vector<double>& v) {
        return c * (std::sin(th) * v[0] + std::cos(th) * v[1]);
    });
    WronskianSet rot = wronskians(rp, rm, DiffScheme::central_fd4);
    auto [f1, g1] = factor_from_wronskian(rot, DiffScheme::central_fd4);
    CHECK(sup_diff(f1, f0) < 1e-8);
    CHECK(sup_diff(g1, g0) < 1e-8);
}
