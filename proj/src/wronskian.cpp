#include "fourops/wronskian.hpp"

#include <algorithm>
#include <cmath>

namespace fourops {

namespace {

GridFunction deriv(const GridFunction& gf, int order, DiffScheme scheme) {
    if (scheme == DiffScheme::analytic_passthrough && !gf.has_model())
        scheme = DiffScheme::central_fd4;
    return differentiate(gf, order, scheme);
}

bool all_models(std::initializer_list<const GridFunction*> gfs) {
    for (const GridFunction* g : gfs)
        if (!g->has_model()) return false;
    return true;
}

void require_nonvanishing(const GridFunction& W) {
    double mn = 1e300;
    double lo = 0.0, hi = 0.0;
    for (double v : W.values) {
        mn = std::min(mn, std::abs(v));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (mn <= 1e-300 || (lo < 0.0 && hi > 0.0))
        throw WronskianVanishesError("W vanishes or changes sign on the grid");
}

}  // namespace

WronskianSet wronskians(const GridFunction& psi_plus, const GridFunction& psi_minus,
                        DiffScheme scheme) {
    const Grid& g = psi_plus.grid;
    if (!(psi_minus.grid == g)) throw GridMismatchError("wronskians: pair on different grids");

    WronskianSet ws;
    if (scheme == DiffScheme::analytic_passthrough && all_models({&psi_plus, &psi_minus})) {
        AnalyticFn p = *psi_plus.model, m = *psi_minus.model;
        ws.W = sample(g, [p, m](double x) {
            Jet a = p(x), b = m(x);
            return a * jet_derivative(b) - b * jet_derivative(a);
        });
        ws.W12 = sample(g, [p, m](double x) {
            Jet a1 = jet_derivative(p(x)), b1 = jet_derivative(m(x));
            return a1 * jet_derivative(b1) - jet_derivative(a1) * b1;
        });
        ws.W23 = sample(g, [p, m](double x) {
            Jet a2 = jet_derivative(jet_derivative(p(x)));
            Jet b2 = jet_derivative(jet_derivative(m(x)));
            return a2 * jet_derivative(b2) - jet_derivative(a2) * b2;
        });
    } else {
        GridFunction p1 = deriv(psi_plus, 1, scheme), m1 = deriv(psi_minus, 1, scheme);
        GridFunction p2 = deriv(psi_plus, 2, scheme), m2 = deriv(psi_minus, 2, scheme);
        GridFunction p3 = deriv(psi_plus, 3, scheme), m3 = deriv(psi_minus, 3, scheme);
        auto det = [&](const GridFunction& a, const GridFunction& b, const GridFunction& c,
                       const GridFunction& d) {
            return pointwise(g, {&a, &b, &c, &d}, [](const std::vector<double>& v) {
                return v[0] * v[1] - v[2] * v[3];
            });
        };
        ws.W = det(psi_plus, m1, psi_minus, p1);
        ws.W12 = det(p1, m2, p2, m1);
        ws.W23 = det(p2, m3, p3, m2);
    }

    const double scale =
        sup_norm(psi_plus) * sup_norm(deriv(psi_minus, 1, scheme)) +
        sup_norm(psi_minus) * sup_norm(deriv(psi_plus, 1, scheme));
    if (sup_norm(ws.W) < 1e-10 * std::max(scale, 1e-300))
        throw LinearDependenceError("wronskians: pair is (numerically) linearly dependent");
    return ws;
}

bool check_wronskian_positive(const WronskianSet& ws) {
    double mn = 1e300, lo = 0.0, hi = 0.0;
    for (double v : ws.W.values) {
        mn = std::min(mn, std::abs(v));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return mn > 1e-300 && !(lo < 0.0 && hi > 0.0);
}

std::pair<GridFunction, GridFunction> factor_from_wronskian(const WronskianSet& ws,
                                                            DiffScheme scheme) {
    if (!check_wronskian_positive(ws))
        throw WronskianVanishesError("factor_from_wronskian: W vanishes or changes sign");
    const Grid& g = ws.W.grid;
    if (scheme == DiffScheme::analytic_passthrough && all_models({&ws.W, &ws.W12})) {
        AnalyticFn Wf = *ws.W.model, W12f = *ws.W12.model;
        GridFunction f = sample(g, [Wf](double x) {
            Jet W = Wf(x);
            return jet_derivative(W) / W;
        });
        GridFunction gg = sample(g, [Wf, W12f](double x) { return -W12f(x) / Wf(x); });
        return {std::move(f), std::move(gg)};
    }
    GridFunction Wp = deriv(ws.W, 1, scheme);
    GridFunction f = pointwise(g, {&Wp, &ws.W},
                               [](const std::vector<double>& a) { return a[0] / a[1]; });
    GridFunction gg = pointwise(g, {&ws.W12, &ws.W},
                                [](const std::vector<double>& a) { return -a[0] / a[1]; });
    return {std::move(f), std::move(gg)};
}

PotentialPair potentials_from_wronskian(const WronskianSet& ws, double E0, DiffScheme scheme) {
    if (!check_wronskian_positive(ws))
        throw WronskianVanishesError("potentials_from_wronskian: W vanishes or changes sign");
    const Grid& g = ws.W.grid;
    GridFunction u, v;
    if (scheme == DiffScheme::analytic_passthrough && all_models({&ws.W, &ws.W12})) {
        AnalyticFn Wf = *ws.W.model, W12f = *ws.W12.model;
        u = sample(g, [Wf, W12f](double x) {
            Jet W = Wf(x);
            return (2.0 * W12f(x) - jet_derivative(jet_derivative(W))) / W;
        });
        v = sample(g, [Wf, W12f, E0](double x) {
            Jet W = Wf(x);
            Jet W12 = W12f(x);
            Jet ratio = W12 / W;
            return Jet::constant(E0) + ratio * ratio + jet_derivative(jet_derivative(W12) / W);
        });
    } else {
        GridFunction Wpp = deriv(ws.W, 2, scheme);
        u = pointwise(g, {&ws.W12, &Wpp, &ws.W}, [](const std::vector<double>& a) {
            return (2.0 * a[0] - a[1]) / a[2];
        });
        GridFunction W12p = deriv(ws.W12, 1, scheme);
        GridFunction ratio = pointwise(g, {&W12p, &ws.W},
                                       [](const std::vector<double>& a) { return a[0] / a[1]; });
        GridFunction ratio_p = deriv(ratio, 1, scheme);
        v = pointwise(g, {&ws.W12, &ws.W, &ratio_p}, [E0](const std::vector<double>& a) {
            double r = a[0] / a[1];
            return E0 + r * r + a[2];
        });
    }
    // Declared asymptotic limits read off the ends; values this close to the
    // boundary of the default box are converged to machine precision.
    auto limit = [](const GridFunction& f, int idx) {
        double val = f.values[idx];
        return std::abs(val) < 1e-6 ? 0.0 : val;
    };
    return make_potential_pair(std::move(u), std::move(v), limit(u, 0), limit(u, g.n - 1),
                               limit(v, 0), limit(v, g.n - 1));
}

GridFunction w23_cross_check_residual(const WronskianSet& ws, DiffScheme scheme) {
    const Grid& g = ws.W.grid;
    if (scheme == DiffScheme::analytic_passthrough && all_models({&ws.W, &ws.W12, &ws.W23})) {
        AnalyticFn Wf = *ws.W.model, W12f = *ws.W12.model, W23f = *ws.W23.model;
        return sample(g, [Wf, W12f, W23f](double x) {
            Jet W = Wf(x), W12 = W12f(x);
            return W * W23f(x) - (jet_derivative(W12) * jet_derivative(W) -
                                  W12 * jet_derivative(jet_derivative(W)) + W12 * W12);
        });
    }
    GridFunction Wp = deriv(ws.W, 1, scheme);
    GridFunction Wpp = deriv(ws.W, 2, scheme);
    GridFunction W12p = deriv(ws.W12, 1, scheme);
    return pointwise(g, {&ws.W, &ws.W23, &W12p, &Wp, &ws.W12, &Wpp},
                     [](const std::vector<double>& a) {
                         return a[0] * a[1] - (a[2] * a[3] - a[4] * a[5] + a[4] * a[4]);
                     });
}

GridFunction hirota_residual(const GridFunction& W, const PotentialPair& pp, double E0,
                             DiffScheme scheme) {
    require_nonvanishing(W);
    const Grid& g = W.grid;
    if (!(pp.u.grid == g)) throw GridMismatchError("hirota_residual: grids differ");
    if (scheme == DiffScheme::analytic_passthrough && all_models({&W, &pp.u, &pp.v})) {
        AnalyticFn Wf = *W.model, uf = *pp.u.model, vf = *pp.v.model;
        return sample(g, [Wf, uf, vf, E0](double x) {
            Jet w = Wf(x), u = uf(x);
            Jet w1 = jet_derivative(w);
            Jet w2 = jet_derivative(w1);
            Jet w3 = jet_derivative(w2);
            Jet sq = w2 / w + u;
            Jet inner = w3 / w + jet_derivative(u) + u * w1 / w;
            return sq * sq + 2.0 * jet_derivative(inner) - 4.0 * (vf(x) - E0);
        });
    }
    GridFunction W1 = deriv(W, 1, scheme);
    GridFunction W2 = deriv(W, 2, scheme);
    GridFunction W3 = deriv(W, 3, scheme);
    GridFunction u1 = deriv(pp.u, 1, scheme);
    GridFunction inner = pointwise(g, {&W3, &W, &u1, &pp.u, &W1},
                                   [](const std::vector<double>& a) {
                                       return a[0] / a[1] + a[2] + a[3] * a[4] / a[1];
                                   });
    GridFunction inner_p = deriv(inner, 1, scheme);
    return pointwise(g, {&W2, &W, &pp.u, &inner_p, &pp.v},
                     [E0](const std::vector<double>& a) {
                         double sq = a[0] / a[1] + a[2];
                         return sq * sq + 2.0 * a[3] - 4.0 * (a[4] - E0);
                     });
}

std::pair<GridFunction, GridFunction> liouville_pair(const GridFunction& psi_plus,
                                                     const GridFunction& psi_minus,
                                                     const GridFunction& W, DiffScheme scheme) {
    (void)scheme;
    require_nonvanishing(W);
    const Grid& g = W.grid;
    // If W < 0, flip the sign convention of the pair so sqrt(W) is real.
    const bool flip = W.values[g.n / 2] < 0.0;
    auto over_sqrt = [&](const GridFunction& psi, bool negate_w_side) {
        if (psi.has_model() && W.has_model()) {
            AnalyticFn pf = *psi.model, Wf = *W.model;
            double sw = flip ? -1.0 : 1.0;
            double sp = (flip && negate_w_side) ? -1.0 : 1.0;
            return sample(g, [pf, Wf, sw, sp](double x) {
                return sp * pf(x) / sqrt(sw * Wf(x));
            });
        }
        double sw = flip ? -1.0 : 1.0;
        double sp = (flip && negate_w_side) ? -1.0 : 1.0;
        return pointwise(g, {&psi, &W}, [sw, sp](const std::vector<double>& a) {
            return sp * a[0] / std::sqrt(sw * a[1]);
        });
    };
    return {over_sqrt(psi_plus, false), over_sqrt(psi_minus, true)};
}

}  // namespace fourops
