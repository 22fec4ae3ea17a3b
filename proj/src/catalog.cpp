#include "fourops/catalog.hpp"

#include <cmath>

#include "fourops/darboux.hpp"

namespace fourops {

namespace {

const double kSqrt2 = std::sqrt(2.0);

PotentialPair pair_from_forms(const Grid& grid, const ClosedForm& uf, const ClosedForm& vf) {
    GridFunction u = sample(grid, uf.fn());
    GridFunction v = sample(grid, vf.fn());
    const double ul = uf.limit(-1), ur = uf.limit(+1);
    const double vl = vf.limit(-1), vr = vf.limit(+1);
    if (std::abs(u.values.front() - ul) > 1e-8 || std::abs(u.values.back() - ur) > 1e-8 ||
        std::abs(v.values.front() - vl) > 1e-8 || std::abs(v.values.back() - vr) > 1e-8)
        throw InvalidRangeError("catalog: grid box too small for the declared asymptotics");
    return make_potential_pair(std::move(u), std::move(v), ul, ur, vl, vr);
}

GridFunction sample_fn(const Grid& g, AnalyticFn f) { return sample(g, std::move(f)); }

FactorizationData make_fac(const Grid& g, AnalyticFn f, AnalyticFn gg, double E0, double kappa) {
    return FactorizationData{sample_fn(g, std::move(f)), sample_fn(g, std::move(gg)), E0, kappa};
}

}  // namespace

CatalogEntry example(int n, const Grid& grid, std::optional<double> k_param) {
    CatalogEntry e;
    switch (n) {
        case 1: {
            e.name = "example1";
            e.u_form = cf_sum({FormTerm{-5.0, {}}, term_sech(12.0, 2.0)});
            e.v_form = cf_sum({term_sech(-6.0, 2.0)});
            e.pp = pair_from_forms(grid, e.u_form, e.v_form);
            e.E0 = -4.0;
            e.kappa = 1.0;
            e.degenerate = true;
            e.psi_pair = {sample_fn(grid, [](double x) { return powi(sech(Jet::variable(x)), 2); }),
                          sample_fn(grid, [](double x) {
                              Jet X = Jet::variable(x);
                              return sinh(X) * powi(sech(X), 2);
                          })};
            e.wronskian_closed_form = {
                sample_fn(grid, [](double x) { return powi(sech(Jet::variable(x)), 3); }),
                sample_fn(grid, [](double x) { return 2.0 * powi(sech(Jet::variable(x)), 3); })};
            e.fac = make_fac(
                grid, [](double x) { return -3.0 * tanh(Jet::variable(x)); },
                [](double) { return Jet::constant(-2.0); }, -4.0, 1.0);
            e.expected_tilde = pair_from_forms(grid, cf_const(-5.0), cf_const(0.0));
            break;
        }
        case 2: {
            e.name = "example2";
            e.u_form = cf_sum({term_sech(16.0, 2.0)});
            e.v_form = cf_sum({term_sech(40.0, 4.0), term_sech(-88.0, 2.0)});
            e.pp = pair_from_forms(grid, e.u_form, e.v_form);
            e.E0 = -64.0;
            e.kappa = 2.0;
            e.degenerate = true;
            e.psi_pair = {sample_fn(grid,
                                    [](double x) {
                                        Jet X = Jet::variable(x);
                                        return cos(2.0 * X) * powi(sech(X), 2);
                                    }),
                          sample_fn(grid, [](double x) {
                              Jet X = Jet::variable(x);
                              return sin(2.0 * X) * powi(sech(X), 2);
                          })};
            e.wronskian_closed_form = {
                sample_fn(grid, [](double x) { return 2.0 * powi(sech(Jet::variable(x)), 4); }),
                sample_fn(grid,
                          [](double x) {
                              Jet s = sech(Jet::variable(x));
                              return 16.0 * powi(s, 4) - 4.0 * powi(s, 6);
                          })};
            e.fac = make_fac(
                grid, [](double x) { return -4.0 * tanh(Jet::variable(x)); },
                [](double x) { return -8.0 + 2.0 * powi(sech(Jet::variable(x)), 2); }, -64.0,
                2.0);
            e.expected_tilde = pair_from_forms(grid, cf_const(0.0), cf_sum({term_sech(-40.0, 2.0)}));
            e.expected_Q = 2813952.0 / 7.0;
            e.expected_Q_tilde = 102400.0;
            break;
        }
        case 3: {
            e.name = "example3";
            e.u_form = cf_const(0.0);
            e.v_form = cf_sum({term_sech(45.0, 4.0), term_sech(-40.0, 2.0)});
            e.pp = pair_from_forms(grid, e.u_form, e.v_form);
            e.E0 = -4.0;
            e.kappa = 1.0;
            e.degenerate = true;
            e.wronskian_closed_form = {
                sample_fn(grid, [](double x) { return powi(sech(Jet::variable(x)), 2); }),
                sample_fn(grid,
                          [](double x) {
                              Jet s = sech(Jet::variable(x));
                              return 2.0 * powi(s, 2) - 3.0 * powi(s, 4);
                          })};
            e.fac = make_fac(
                grid, [](double x) { return -2.0 * tanh(Jet::variable(x)); },
                [](double x) { return -2.0 + 3.0 * powi(sech(Jet::variable(x)), 2); }, -4.0,
                1.0);
            e.expected_tilde = pair_from_forms(
                grid, cf_sum({term_sech(-8.0, 2.0)}),
                cf_sum({term_sech(25.0, 4.0), term_sech(-16.0, 2.0)}));
            break;
        }
        case 4: {
            e.name = "example4";
            e.u_form = cf_sum({FormTerm{-1.0, {}}, term_sech(4.0, 2.0)});
            e.v_form = cf_sum({term_sech(6.0, 2.0), term_sech(-8.0, 4.0)});
            e.pp = pair_from_forms(grid, e.u_form, e.v_form);
            e.E0 = 0.0;
            e.kappa = 0.0;
            e.degenerate = false;
            // The kernel of A: sech is the ground state, tanh the second
            // (non-normalizable) solution.
            e.psi_pair = {sample_fn(grid, [](double x) { return sech(Jet::variable(x)); }),
                          sample_fn(grid, [](double x) { return tanh(Jet::variable(x)); })};
            e.psi_pair_normalizable = false;
            e.wronskian_closed_form = {
                sample_fn(grid, [](double x) { return sech(Jet::variable(x)); }),
                sample_fn(grid, [](double x) { return powi(sech(Jet::variable(x)), 3); })};
            e.fac = make_fac(
                grid, [](double x) { return -tanh(Jet::variable(x)); },
                [](double x) { return -powi(sech(Jet::variable(x)), 2); }, 0.0, 0.0);
            e.expected_tilde = pair_from_forms(grid, cf_const(-1.0), cf_const(0.0));
            break;
        }
        case 5: {
            if (!k_param) throw MissingParameterError("example 5 requires the family parameter k");
            const double k = *k_param;
            if (!(k > 0.0)) throw MissingParameterError("example 5: k must be positive");
            e.name = "example5(k=" + std::to_string(k) + ")";
            const double cu = 2.0 * (1.0 + 2.0 / k);
            const double cv2 = -4.0 * (1.0 + 1.0 / k - 1.0 / (k * k * k));
            const double cv4 = (1.0 - 1.0 / k) * (1.0 + 5.0 / k + 6.0 / (k * k));
            e.u_form = cf_sum({term_sech(cu, 2.0, 1.0 / k)});
            e.v_form = cf_sum({term_sech(cv2, 2.0, 1.0 / k), term_sech(cv4, 4.0, 1.0 / k)});
            e.pp = pair_from_forms(grid, e.u_form, e.v_form);
            e.E0 = -4.0;
            e.kappa = 1.0;
            e.degenerate = true;
            e.psi_pair = {sample_fn(grid,
                                    [k](double x) {
                                        Jet X = Jet::variable(x);
                                        return cos(X) * pow(sech(X * (1.0 / k)), k);
                                    }),
                          sample_fn(grid, [k](double x) {
                              Jet X = Jet::variable(x);
                              return sin(X) * pow(sech(X * (1.0 / k)), k);
                          })};
            break;
        }
        default:
            throw UnknownExampleError("example: n must be 1..5");
    }
    return e;
}

CatalogEntry follyton(double kappa, const Grid& grid) {
    if (!(kappa > 0.0)) throw InvalidKappaError("follyton: kappa must be positive");
    auto [pp, fac] = add_eigenvalue_free(kappa, grid);

    CatalogEntry e;
    e.name = "follyton(kappa=" + std::to_string(kappa) + ")";
    const double k2 = kappa * kappa, k4 = k2 * k2;
    e.u_form = cf_sum({term_chi(16.0 * k2 * kSqrt2, 1.0, 2.0 * kappa),
                       term_chi(-16.0 * k2, 2.0, 2.0 * kappa)});
    e.v_form = cf_sum({term_chi(16.0 * k4 * kSqrt2, 1.0, 2.0 * kappa),
                       term_chi(-192.0 * k4, 2.0, 2.0 * kappa),
                       term_chi(256.0 * k4 * kSqrt2, 3.0, 2.0 * kappa),
                       term_chi(-128.0 * k4, 4.0, 2.0 * kappa)});
    e.pp = std::move(pp);
    e.E0 = fac.E0;
    e.kappa = kappa;
    e.degenerate = true;
    // W12 = -g W with g = -2 kappa^2 (1 + sqrt(2) W - 2 W^2)
    GridFunction W = sample(grid, [kappa](double x) {
        return 1.0 / (kSqrt2 + cosh(Jet::variable(x) * (2.0 * kappa)));
    });
    GridFunction W12 = sample(grid, [kappa, k2](double x) {
        Jet w = 1.0 / (kSqrt2 + cosh(Jet::variable(x) * (2.0 * kappa)));
        return 2.0 * k2 * (w + kSqrt2 * w * w - 2.0 * w * w * w);
    });
    e.wronskian_closed_form = {std::move(W), std::move(W12)};
    e.fac = std::move(fac);
    e.expected_tilde = pair_from_forms(grid, cf_const(0.0), cf_const(0.0));
    e.expected_Q = 16384.0 / 7.0 * std::pow(kappa, 7);
    e.expected_Q_tilde = 0.0;
    return e;
}

double chi(double x) { return 1.0 / (kSqrt2 + std::cosh(x)); }

double chi_identity_residuals(const Grid& grid) {
    double worst = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        Jet c = 1.0 / (kSqrt2 + cosh(Jet::variable(x)));
        Jet c1 = jet_derivative(c);
        Jet c2 = jet_derivative(c1);
        Jet c3 = jet_derivative(c2);
        Jet c4 = jet_derivative(c3);
        const double r1 = (c2 - c * (1.0 - 3.0 * kSqrt2 * c + 2.0 * c * c)).value();
        const double r2 = (c1 * c1 - c * c * (1.0 - 2.0 * kSqrt2 * c + c * c)).value();
        const double r3 = (c3 - c1 * (1.0 - 6.0 * kSqrt2 * c + 6.0 * c * c)).value();
        const double r4 =
            (c4 - c * (1.0 - 15.0 * kSqrt2 * c + 80.0 * c * c - 60.0 * kSqrt2 * c * c * c +
                       24.0 * powi(c, 4)))
                .value();
        for (double r : {r1, r2, r3, r4}) worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace fourops
