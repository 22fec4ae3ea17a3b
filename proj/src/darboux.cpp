#include "fourops/darboux.hpp"

#include <algorithm>
#include <cmath>

namespace fourops {

namespace {

GridFunction deriv(const GridFunction& gf, int order, DiffScheme scheme) {
    if (scheme == DiffScheme::analytic_passthrough && !gf.has_model())
        scheme = DiffScheme::central_fd4;
    return differentiate(gf, order, scheme);
}

}  // namespace

PotentialPair remove_eigenvalue(const PotentialPair& pp, const FactorizationData& fac,
                                DiffScheme scheme) {
    auto [r1, r2] = factorization_identity_residuals(pp, fac, scheme);
    if (std::max(r1, r2) > 1e-4)
        throw IdentityViolationError(
            "remove_eigenvalue: factorization identities violated (residual " +
            std::to_string(std::max(r1, r2)) + ")");

    const Grid& g = pp.u.grid;
    GridFunction u_t, v_t;
    if (scheme == DiffScheme::analytic_passthrough && pp.u.has_model() && pp.v.has_model() &&
        fac.f.has_model() && fac.g.has_model()) {
        AnalyticFn uf = *pp.u.model, vf = *pp.v.model, ff = *fac.f.model, gf = *fac.g.model;
        u_t = sample(g, [uf, ff](double x) { return uf(x) + 4.0 * jet_derivative(ff(x)); });
        v_t = sample(g, [vf, ff, gf](double x) {
            Jet f = ff(x);
            Jet f1 = jet_derivative(f);
            Jet f2 = jet_derivative(f1);
            return vf(x) + 2.0 * f * jet_derivative(gf(x)) - f * f2 + jet_derivative(f2);
        });
    } else {
        GridFunction f1 = deriv(fac.f, 1, scheme);
        GridFunction f2 = deriv(fac.f, 2, scheme);
        GridFunction f3 = deriv(fac.f, 3, scheme);
        GridFunction g1 = deriv(fac.g, 1, scheme);
        u_t = pointwise(g, {&pp.u, &f1},
                        [](const std::vector<double>& a) { return a[0] + 4.0 * a[1]; });
        v_t = pointwise(g, {&pp.v, &fac.f, &g1, &f2, &f3}, [](const std::vector<double>& a) {
            return a[0] + 2.0 * a[1] * a[2] - a[1] * a[3] + a[4];
        });
    }
    return make_potential_pair(std::move(u_t), std::move(v_t), pp.u_limit_left, pp.u_limit_right,
                               pp.v_limit_left, pp.v_limit_right);
}

IsospectralityReport removal_isospectrality_check(const PotentialPair& pp,
                                                  const PotentialPair& pp_tilde, double E0,
                                                  int k) {
    if (!(pp.u.grid == pp_tilde.u.grid))
        throw GridMismatchError("removal_isospectrality_check: pairs on different grids");

    // the removed double level occupies two slots of L's list, so fetch two
    // extra levels to compare the shared bound states one-to-one
    SpectrumResult sl = lowest_eigenpairs(assemble_L(pp), k + 2);
    SpectrumResult st = lowest_eigenpairs(assemble_L(pp_tilde), k);

    IsospectralityReport rep;
    rep.eigenvalues_L = sl.eigenvalues;
    rep.eigenvalues_L_tilde = st.eigenvalues;
    rep.e0 = E0;

    const double e0_tol = 1e-3 * std::max(1.0, std::abs(E0));
    // next distinct level of L above the E0 cluster
    double next = 0.0;
    bool have_next = false;
    for (double lam : sl.eigenvalues)
        if (lam > E0 + e0_tol) {
            next = lam;
            have_next = true;
            break;
        }
    const double gap = have_next ? std::abs(E0 - next) : std::abs(E0);

    rep.margin = 1e300;
    for (double lam : st.eigenvalues) rep.margin = std::min(rep.margin, std::abs(lam - E0));
    rep.e0_removed = rep.margin > 0.5 * gap;

    // every bound state of L~ must appear in L's spectrum
    const double bound_threshold = -1e-3 * std::max(1.0, std::abs(E0));
    rep.others_match = true;
    rep.max_match_error = 0.0;
    for (double lam : st.eigenvalues) {
        if (lam >= bound_threshold) continue;
        double best = 1e300;
        for (double mu : sl.eigenvalues) best = std::min(best, std::abs(lam - mu));
        double rel = best / std::max(1.0, std::abs(lam));
        rep.max_match_error = std::max(rep.max_match_error, rel);
        if (rel > 1e-3) rep.others_match = false;
    }
    return rep;
}

GridFunction g_from_f(const GridFunction& f, const GridFunction& u, DiffScheme scheme) {
    if (!(f.grid == u.grid)) throw GridMismatchError("g_from_f: grids differ");
    if (scheme == DiffScheme::analytic_passthrough && f.has_model() && u.has_model()) {
        AnalyticFn ff = *f.model, uf = *u.model;
        return sample(f.grid, [ff, uf](double x) {
            Jet fj = ff(x);
            return 0.5 * (3.0 * jet_derivative(fj) - fj * fj - uf(x));
        });
    }
    GridFunction f1 = deriv(f, 1, scheme);
    return pointwise(f.grid, {&f1, &f, &u}, [](const std::vector<double>& a) {
        return 0.5 * (3.0 * a[0] - a[1] * a[1] - a[2]);
    });
}

GridFunction addition_residual(const GridFunction& W, const PotentialPair& pp, double kappa,
                               DiffScheme scheme) {
    const Grid& g = W.grid;
    if (!(pp.u.grid == g)) throw GridMismatchError("addition_residual: grids differ");
    {
        double mn = 1e300;
        for (double v : W.values) mn = std::min(mn, std::abs(v));
        if (mn <= 1e-300) throw WronskianVanishesError("addition_residual: W vanishes");
    }
    const double k4 = 16.0 * std::pow(kappa, 4);

    if (scheme == DiffScheme::analytic_passthrough && W.has_model() && pp.u.has_model() &&
        pp.v.has_model()) {
        AnalyticFn Wf = *W.model, uf = *pp.u.model, vf = *pp.v.model;
        return sample(g, [Wf, uf, vf, k4](double x) {
            Jet w = Wf(x), u = uf(x);
            Jet w1 = jet_derivative(w);
            Jet w2 = jet_derivative(w1);
            Jet w3 = jet_derivative(w2);
            Jet w4 = jet_derivative(w3);
            Jet r = w1 / w;  // W'/W
            Jet r2 = r * r;
            return 40.0 * r2 * r2 - 2.0 * w4 / w + 14.0 * (w3 * w1) / (w * w) +
                   13.0 * (w2 * w2) / (w * w) - 64.0 * (w2 * w1 * w1) / (w * w * w) +
                   2.0 * jet_derivative(jet_derivative(u)) + u * u -
                   2.0 * jet_derivative(u) * r + 2.0 * u * (r2 - 2.0 * jet_derivative(r)) -
                   Jet::constant(k4) - 4.0 * vf(x);
        });
    }

    GridFunction w1 = deriv(W, 1, scheme);
    GridFunction w2 = deriv(W, 2, scheme);
    GridFunction w3 = deriv(W, 3, scheme);
    GridFunction w4 = deriv(W, 4, scheme);
    GridFunction u1 = deriv(pp.u, 1, scheme);
    GridFunction u2 = deriv(pp.u, 2, scheme);
    GridFunction ratio = pointwise(g, {&w1, &W},
                                   [](const std::vector<double>& a) { return a[0] / a[1]; });
    GridFunction ratio_p = deriv(ratio, 1, scheme);
    return pointwise(
        g, {&W, &w1, &w2, &w3, &w4, &pp.u, &u1, &u2, &pp.v, &ratio_p},
        [k4](const std::vector<double>& a) {
            const double W0 = a[0], W1 = a[1], W2 = a[2], W3 = a[3], W4 = a[4];
            const double u = a[5], up = a[6], upp = a[7], v = a[8], rp = a[9];
            const double r = W1 / W0;
            return 40.0 * std::pow(r, 4) - 2.0 * W4 / W0 + 14.0 * W3 * W1 / (W0 * W0) +
                   13.0 * W2 * W2 / (W0 * W0) - 64.0 * W2 * W1 * W1 / (W0 * W0 * W0) +
                   2.0 * upp + u * u - 2.0 * up * r + 2.0 * u * (r * r - 2.0 * rp) - k4 -
                   4.0 * v;
        });
}

std::pair<PotentialPair, FactorizationData> add_eigenvalue_free(double kappa, const Grid& grid) {
    if (!(kappa > 0.0)) throw InvalidKappaError("add_eigenvalue_free: kappa must be positive");
    const double k2 = kappa * kappa;
    const double k4 = k2 * k2;
    const double s2 = std::sqrt(2.0);

    AnalyticFn Wfn = [kappa, s2](double x) {
        Jet arg = Jet::variable(x) * (2.0 * kappa);
        return 1.0 / (s2 + cosh(arg));
    };
    AnalyticFn ufn = [Wfn, k2, s2](double x) {
        Jet W = Wfn(x);
        return 16.0 * k2 * (s2 * W - W * W);
    };
    AnalyticFn vfn = [Wfn, k4, s2](double x) {
        Jet W = Wfn(x);
        Jet W2 = W * W;
        return 16.0 * k4 * (s2 * W - 12.0 * W2 + 16.0 * s2 * W2 * W - 8.0 * W2 * W2);
    };
    AnalyticFn ffn = [kappa, s2](double x) {
        Jet arg = Jet::variable(x) * (2.0 * kappa);
        return -2.0 * kappa * sinh(arg) / (s2 + cosh(arg));
    };
    AnalyticFn gfn = [Wfn, k2, s2](double x) {
        Jet W = Wfn(x);
        return -2.0 * k2 * (1.0 + s2 * W - 2.0 * W * W);
    };

    PotentialPair pp = make_potential_pair(sample(grid, ufn), sample(grid, vfn));
    FactorizationData fac{sample(grid, ffn), sample(grid, gfn), -4.0 * k4, kappa};
    return {std::move(pp), std::move(fac)};
}

}  // namespace fourops
