#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fourops/catalog.hpp"
#include "fourops/grid.hpp"

using namespace fourops;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("jet arithmetic reproduces known derivatives") {
    const double x0 = 0.7;
    Jet s = sin(Jet::variable(x0));
    CHECK(s.value() == doctest::Approx(std::sin(x0)).epsilon(1e-14));
    CHECK(s.derivative(1) == doctest::Approx(std::cos(x0)).epsilon(1e-14));
    CHECK(s.derivative(2) == doctest::Approx(-std::sin(x0)).epsilon(1e-14));
    CHECK(s.derivative(5) == doctest::Approx(std::cos(x0)).epsilon(1e-13));

    Jet t = tanh(Jet::variable(x0));
    const double th = std::tanh(x0);
    CHECK(t.derivative(1) == doctest::Approx(1.0 - th * th).epsilon(1e-14));
    // (tanh)'' = -2 tanh sech^2
    CHECK(t.derivative(2) == doctest::Approx(-2.0 * th * (1.0 - th * th)).epsilon(1e-13));

    Jet q = pow(sech(Jet::variable(x0)), 2.5);
    Jet q2 = exp(2.5 * log(sech(Jet::variable(x0))));
    for (int k = 0; k <= 6; ++k)
        CHECK(q.derivative(k) == doctest::Approx(q2.derivative(k)).epsilon(1e-12));
}

TEST_CASE("make_uniform_grid spacing conventions") {
    Grid g1 = make_uniform_grid(-40.0, 40.0, 4001, false);
    CHECK(g1.spacing() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(g1.point(0) == doctest::Approx(-40.0));
    CHECK(g1.point(4000) == doctest::Approx(40.0));

    Grid g2 = make_uniform_grid(0.0, 2.0 * kPi, 256, true);
    CHECK(g2.spacing() == doctest::Approx(2.0 * kPi / 256).epsilon(1e-15));

    CHECK_THROWS_AS(make_uniform_grid(1.0, 0.0, 100, false), InvalidRangeError);
    CHECK_THROWS_AS(make_uniform_grid(0.0, 1.0, 8, false), TooFewPointsError);
}

TEST_CASE("spectral differentiation of sin on a periodic grid") {
    Grid g = make_uniform_grid(0.0, 2.0 * kPi, 256, true);
    GridFunction f = sample(g, [](double x) { return sin(Jet::variable(x)); });
    GridFunction d = differentiate(f, 1, DiffScheme::periodic_spectral);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(d.values[i] - std::cos(g.point(i))));
    CHECK(err < 1e-10);
}

TEST_CASE("chi second derivative matches its closed-form identity") {
    Grid g = make_uniform_grid(-20.0, 20.0, 2001, false);
    GridFunction f = sample(g, [](double x) {
        return 1.0 / (std::sqrt(2.0) + cosh(Jet::variable(x)));
    });
    GridFunction d2 = differentiate(f, 2, DiffScheme::analytic_passthrough);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double c = chi(g.point(i));
        err = std::max(err,
                       std::abs(d2.values[i] - c * (1.0 - 3.0 * std::sqrt(2.0) * c + 2.0 * c * c)));
    }
    CHECK(err < 1e-13);

    GridFunction d2fd = differentiate(f, 2, DiffScheme::central_fd4);
    double errfd = 0.0;
    for (int i = 0; i < g.n; ++i) errfd = std::max(errfd, std::abs(d2fd.values[i] - d2.values[i]));
    CHECK(errfd < 1e-6);
}

TEST_CASE("derivatives of a constant vanish at every order") {
    Grid g = make_uniform_grid(-5.0, 5.0, 101, false);
    GridFunction c = sample(g, [](double) { return Jet::constant(3.25); });
    for (int m = 1; m <= 5; ++m) {
        GridFunction d = differentiate(c, m, DiffScheme::central_fd4);
        // boundary stencils for high orders amplify roundoff by ~1/h^m
        CHECK(sup_norm(d) < 1e-7);
    }
}

TEST_CASE("differentiation is linear") {
    Grid g = make_uniform_grid(-8.0, 8.0, 401, false);
    GridFunction f = sample(g, [](double x) { return sin(Jet::variable(x)); });
    GridFunction h = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); });
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = dist(rng), b = dist(rng);
        GridFunction comb = pointwise(g, {&f, &h}, [a, b](const std::vector<double>& v) {
            return a * v[0] + b * v[1];
        });
        GridFunction dc = differentiate(comb, 2, DiffScheme::central_fd4);
        GridFunction df = differentiate(f, 2, DiffScheme::central_fd4);
        GridFunction dh = differentiate(h, 2, DiffScheme::central_fd4);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i)
            err = std::max(err, std::abs(dc.values[i] - a * df.values[i] - b * dh.values[i]));
        CHECK(err < 1e-10);
    }
}

TEST_CASE("integral of a derivative vanishes on periodic grids") {
    Grid g = make_uniform_grid(-10.0, 10.0, 128, true);
    GridFunction f = sample(g, [](double x) {
        Jet X = Jet::variable(x);
        return sin(X * (2.0 * kPi / 20.0) * 3.0) + 0.5 * cos(X * (2.0 * kPi / 20.0));
    });
    GridFunction d = differentiate(f, 1, DiffScheme::periodic_spectral);
    CHECK(std::abs(integrate(d)) < 1e-12);
}

TEST_CASE("two first derivatives agree with one second derivative to O(h^4)") {
    Grid g = make_uniform_grid(-10.0, 10.0, 1001, false);
    GridFunction f = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); });
    GridFunction d1 = differentiate(differentiate(f, 1, DiffScheme::central_fd4), 1,
                                    DiffScheme::central_fd4);
    GridFunction d2 = differentiate(f, 2, DiffScheme::central_fd4);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(d1.values[i] - d2.values[i]));
    CHECK(err < 1e-5);
}

TEST_CASE("quadrature of decaying profiles") {
    Grid g = make_uniform_grid(-40.0, 40.0, 4001, false);
    GridFunction s2 = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 2); });
    CHECK(std::abs(integrate(s2) - 2.0 * std::tanh(40.0)) < 1e-12);

    GridFunction zero = sample(g, [](double) { return Jet(); });
    CHECK(integrate(zero) == 0.0);

    GridFunction s4 = sample(g, [](double x) { return powi(sech(Jet::variable(x)), 4); });
    CHECK(std::abs(integrate(s4) - 4.0 / 3.0) < 1e-10);
}

TEST_CASE("fornberg weights reproduce the classic 5-point stencils") {
    std::vector<double> nodes = {-2, -1, 0, 1, 2};
    std::vector<double> w1 = fornberg_weights(0.0, nodes, 1);
    const double exp1[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) CHECK(w1[i] == doctest::Approx(exp1[i]).epsilon(1e-13));
    std::vector<double> w2 = fornberg_weights(0.0, nodes, 2);
    const double exp2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) CHECK(w2[i] == doctest::Approx(exp2[i]).epsilon(1e-13));
}

TEST_CASE("scheme and order validation") {
    Grid g = make_uniform_grid(-5.0, 5.0, 64, false);
    GridFunction f = sample(g, [](double x) { return sin(Jet::variable(x)); });
    CHECK_THROWS_AS(differentiate(f, 6, DiffScheme::central_fd4), UnsupportedOrderError);
    CHECK_THROWS_AS(differentiate(f, 1, DiffScheme::periodic_spectral), SchemeMismatchError);
    GridFunction bare = from_samples(g, f.values);
    CHECK_THROWS_AS(differentiate(bare, 1, DiffScheme::analytic_passthrough),
                    SchemeMismatchError);
}
