#include "fourops/flow.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace fourops {

namespace {

using cplx = std::complex<double>;

GridFunction deriv_auto(const GridFunction& gf, int order) {
    if (gf.has_model()) return differentiate(gf, order, DiffScheme::analytic_passthrough);
    if (gf.grid.periodic) return differentiate(gf, order, DiffScheme::periodic_spectral);
    return differentiate(gf, order, DiffScheme::central_fd4);
}

}  // namespace

double q_functional(const PotentialPair& pp) {
    if (!pp.decaying())
        throw NonintegrablePotentialError(
            "q_functional: potentials with nonzero asymptotic constants are not integrable");
    const Grid& g = pp.u.grid;
    GridFunction u1 = deriv_auto(pp.u, 1);
    GridFunction u2 = deriv_auto(pp.u, 2);
    GridFunction v2 = deriv_auto(pp.v, 2);
    GridFunction integrand = pointwise(
        g, {&pp.u, &pp.v, &u1, &u2, &v2}, [](const std::vector<double>& a) {
            const double u = a[0], v = a[1], up = a[2], upp = a[3], vpp = a[4];
            return 48.0 * v * v + 1.25 * u * u * u * u - 12.0 * u * u * v - 40.0 * u * vpp -
                   13.0 * u * up * up + 9.0 * upp * upp;
        });
    return integrate(integrand);
}

double delta_q_predicted(double kappa) {
    if (!(kappa > 0.0)) throw InvalidKappaError("delta_q_predicted: kappa must be positive");
    return -32.0 * std::pow(kappa, 7) * 512.0 / 7.0;
}

double delta_q_measured(const PotentialPair& pp, const PotentialPair& pp_tilde) {
    return q_functional(pp_tilde) - q_functional(pp);
}

std::pair<GridFunction, GridFunction> flow_rhs(const GridFunction& u, const GridFunction& v,
                                               DiffScheme scheme) {
    const Grid& g = u.grid;
    if (!(v.grid == g)) throw GridMismatchError("flow_rhs: u and v on different grids");
    if (scheme == DiffScheme::periodic_spectral && !g.periodic)
        throw SchemeMismatchError("flow_rhs: spectral scheme needs a periodic grid");

    auto d = [&](const GridFunction& f, int m) {
        if (scheme == DiffScheme::analytic_passthrough && !f.has_model())
            return differentiate(f, m, DiffScheme::central_fd4);
        return differentiate(f, m, scheme);
    };
    GridFunction u1 = d(u, 1), u2 = d(u, 2), u3 = d(u, 3), u5 = d(u, 5);
    GridFunction v1 = d(v, 1), v3 = d(v, 3);

    GridFunction ut = pointwise(g, {&u3, &u, &u1, &v1}, [](const std::vector<double>& a) {
        return 10.0 * a[0] + 6.0 * a[1] * a[2] - 24.0 * a[3];
    });
    GridFunction vt = pointwise(g, {&u5, &u, &u3, &u1, &u2, &v3, &v1},
                                [](const std::vector<double>& a) {
                                    return 3.0 * (a[0] + a[1] * a[2] + a[3] * a[4]) -
                                           8.0 * a[5] - 6.0 * a[1] * a[6];
                                });
    return {std::move(ut), std::move(vt)};
}

EvolutionState make_evolution_state(const GridFunction& u, const GridFunction& v) {
    if (!(u.grid == v.grid)) throw GridMismatchError("make_evolution_state: grids differ");
    if (!u.grid.periodic)
        throw SchemeMismatchError("make_evolution_state: evolution uses a periodic grid");
    EvolutionState st;
    st.t = 0.0;
    st.u = u;
    st.v = v;
    st.q_initial = q_functional(make_potential_pair(u, v));
    st.q_current = st.q_initial;
    return st;
}

namespace {

// phi functions, series-protected near 0
cplx phi1(cplx z) {
    if (std::abs(z) < 0.25) {
        cplx s = 0.0, term = 1.0;
        long long fact = 1;  // (j+1)!
        for (int j = 0; j < 16; ++j) {
            s += term / static_cast<double>(fact);
            term *= z;
            fact *= (j + 2);
        }
        return s;
    }
    return (std::exp(z) - 1.0) / z;
}

cplx phi2(cplx z) {
    if (std::abs(z) < 0.25) {
        cplx s = 0.0, term = 1.0;
        long long fact = 2;  // (j+2)!
        for (int j = 0; j < 16; ++j) {
            s += term / static_cast<double>(fact);
            term *= z;
            fact *= (j + 3);
        }
        return s;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

cplx phi3(cplx z) {
    if (std::abs(z) < 0.25) {
        cplx s = 0.0, term = 1.0;
        long long fact = 6;  // (j+3)!
        for (int j = 0; j < 16; ++j) {
            s += term / static_cast<double>(fact);
            term *= z;
            fact *= (j + 4);
        }
        return s;
    }
    return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

struct Mat2 {
    cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};  // [[a,b],[c,d]]
};

// f(M) for the per-mode linear block M = i [[-10 k^3, -24 k], [3 k^5, 8 k^3]],
// whose eigen-decomposition is known in closed form: eigenvalues i*2k^3 and
// -i*4k^3 with eigenvectors (2, -k^2) and (4, -k^2).
Mat2 mode_matrix_function(double k, double scale, const std::function<cplx(cplx)>& f) {
    if (k == 0.0) {
        cplx v = f(0.0);
        return {v, 0.0, 0.0, v};
    }
    const double k2 = k * k, k3 = k2 * k;
    const cplx z1 = cplx(0.0, 2.0 * k3 * scale);
    const cplx z2 = cplx(0.0, -4.0 * k3 * scale);
    const cplx f1 = f(z1), f2 = f(z2);
    // V = [[2,4],[-k2,-k2]], V^{-1} = (1/(2 k2)) [[-k2,-4],[k2,2]]
    Mat2 m;
    const double inv = 1.0 / (2.0 * k2);
    m.a = inv * (2.0 * f1 * (-k2) + 4.0 * f2 * k2);
    m.b = inv * (2.0 * f1 * (-4.0) + 4.0 * f2 * 2.0);
    m.c = inv * ((-k2) * f1 * (-k2) + (-k2) * f2 * k2);
    m.d = inv * ((-k2) * f1 * (-4.0) + (-k2) * f2 * 2.0);
    return m;
}

struct SpectralWorkspace {
    int n, nc;
    double len;
    std::vector<double> real_buf;
    std::vector<cplx> cplx_buf;
    fftw_plan fwd, bwd;

    explicit SpectralWorkspace(const Grid& g)
        : n(g.n), nc(g.n / 2 + 1), len(g.x_max - g.x_min), real_buf(g.n), cplx_buf(nc) {
        fwd = fftw_plan_dft_r2c_1d(n, real_buf.data(),
                                   reinterpret_cast<fftw_complex*>(cplx_buf.data()),
                                   FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cplx_buf.data()),
                                   real_buf.data(), FFTW_ESTIMATE);
    }
    ~SpectralWorkspace() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    double wavenumber(int j) const { return 2.0 * M_PI * j / len; }

    std::vector<cplx> to_spectral(const std::vector<double>& x) {
        real_buf = x;
        fftw_execute(fwd);
        std::vector<cplx> out(cplx_buf);
        const double s = 1.0 / n;
        for (cplx& c : out) c *= s;
        return out;
    }
    std::vector<double> to_physical(const std::vector<cplx>& s) {
        cplx_buf = s;
        fftw_execute(bwd);
        return real_buf;
    }
    std::vector<double> deriv_physical(const std::vector<cplx>& s, int m) {
        std::vector<cplx> d(nc);
        const cplx I(0.0, 1.0);
        for (int j = 0; j < nc; ++j) {
            if (j == n / 2 && n % 2 == 0 && m % 2 == 1) {
                d[j] = 0.0;
                continue;
            }
            d[j] = s[j] * std::pow(I * wavenumber(j), m);
        }
        return to_physical(d);
    }
};

}  // namespace

EvolutionState evolve(const EvolutionState& state, double dt, int n_steps) {
    if (!(dt > 0.0)) throw CflViolationError("evolve: dt must be positive");
    const Grid& g = state.u.grid;
    const int n = g.n;
    SpectralWorkspace ws(g);
    const int nc = ws.nc;

    // Nonlinear advection stability bound (the linear part is exact).
    const double kmax = ws.wavenumber(n / 2);
    double umax = sup_norm(state.u);
    if (dt * 6.0 * std::max(umax, 1e-8) * kmax > 2.8)
        throw CflViolationError("evolve: dt too large for the nonlinear advection term");

    // Precompute the per-mode ETDRK4 coefficient matrices.
    std::vector<Mat2> E(nc), E2(nc), Q(nc), F1(nc), F2(nc), F3(nc);
    for (int j = 0; j < nc; ++j) {
        const double k = ws.wavenumber(j);
        E[j] = mode_matrix_function(k, dt, [](cplx z) { return std::exp(z); });
        E2[j] = mode_matrix_function(k, dt / 2.0, [](cplx z) { return std::exp(z); });
        Q[j] = mode_matrix_function(k, dt / 2.0, [dt](cplx z) { return dt / 2.0 * phi1(z); });
        F1[j] = mode_matrix_function(
            k, dt, [dt](cplx z) { return dt * (phi1(z) - 3.0 * phi2(z) + 4.0 * phi3(z)); });
        F2[j] = mode_matrix_function(k, dt,
                                     [dt](cplx z) { return dt * (phi2(z) - 2.0 * phi3(z)); });
        F3[j] = mode_matrix_function(k, dt,
                                     [dt](cplx z) { return dt * (4.0 * phi3(z) - phi2(z)); });
    }

    auto apply = [nc](const std::vector<Mat2>& M, const std::vector<cplx>& us,
                      const std::vector<cplx>& vs, std::vector<cplx>& ou,
                      std::vector<cplx>& ov) {
        for (int j = 0; j < nc; ++j) {
            const cplx x = us[j], y = vs[j];  // inputs may alias outputs
            ou[j] = M[j].a * x + M[j].b * y;
            ov[j] = M[j].c * x + M[j].d * y;
        }
    };

    // Nonlinear remainder: N_u = 6 u u', N_v = 3(u u''' + u' u'') - 6 u v'.
    auto nonlinear = [&](const std::vector<cplx>& us, const std::vector<cplx>& vs,
                         std::vector<cplx>& nu, std::vector<cplx>& nv) {
        std::vector<double> u = ws.to_physical(us);
        std::vector<double> u1 = ws.deriv_physical(us, 1);
        std::vector<double> u2 = ws.deriv_physical(us, 2);
        std::vector<double> u3 = ws.deriv_physical(us, 3);
        std::vector<double> v1 = ws.deriv_physical(vs, 1);
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = 6.0 * u[i] * u1[i];
            b[i] = 3.0 * (u[i] * u3[i] + u1[i] * u2[i]) - 6.0 * u[i] * v1[i];
        }
        nu = ws.to_spectral(a);
        nv = ws.to_spectral(b);
    };

    std::vector<cplx> us = ws.to_spectral(state.u.values);
    std::vector<cplx> vs = ws.to_spectral(state.v.values);

    std::vector<cplx> nu(nc), nv(nc), au(nc), av(nc), bu(nc), bv(nc), cu(nc), cv(nc);
    std::vector<cplx> nau(nc), nav(nc), nbu(nc), nbv(nc), ncu(nc), ncv(nc);
    std::vector<cplx> t1u(nc), t1v(nc), t2u(nc), t2v(nc);

    for (int step = 0; step < n_steps; ++step) {
        nonlinear(us, vs, nu, nv);

        apply(E2, us, vs, t1u, t1v);
        apply(Q, nu, nv, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            au[j] = t1u[j] + t2u[j];
            av[j] = t1v[j] + t2v[j];
        }
        nonlinear(au, av, nau, nav);

        apply(Q, nau, nav, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            bu[j] = t1u[j] + t2u[j];
            bv[j] = t1v[j] + t2v[j];
        }
        nonlinear(bu, bv, nbu, nbv);

        apply(E2, au, av, t1u, t1v);
        for (int j = 0; j < nc; ++j) {
            t2u[j] = 2.0 * nbu[j] - nu[j];
            t2v[j] = 2.0 * nbv[j] - nv[j];
        }
        apply(Q, t2u, t2v, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            cu[j] = t1u[j] + t2u[j];
            cv[j] = t1v[j] + t2v[j];
        }
        nonlinear(cu, cv, ncu, ncv);

        apply(E, us, vs, t1u, t1v);
        apply(F1, nu, nv, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            us[j] = t1u[j] + t2u[j];
            vs[j] = t1v[j] + t2v[j];
        }
        for (int j = 0; j < nc; ++j) {
            t2u[j] = nau[j] + nbu[j];
            t2v[j] = nav[j] + nbv[j];
        }
        apply(F2, t2u, t2v, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            us[j] += 2.0 * t2u[j];
            vs[j] += 2.0 * t2v[j];
        }
        apply(F3, ncu, ncv, t2u, t2v);
        for (int j = 0; j < nc; ++j) {
            us[j] += t2u[j];
            vs[j] += t2v[j];
        }

        for (int j = 0; j < nc; ++j)
            if (!std::isfinite(us[j].real()) || !std::isfinite(us[j].imag()) ||
                !std::isfinite(vs[j].real()) || !std::isfinite(vs[j].imag()))
                throw BlowUpError("evolve: non-finite value at t = " +
                                  std::to_string(state.t + (step + 1) * dt));
    }

    EvolutionState out;
    out.t = state.t + n_steps * dt;
    out.u = GridFunction{g, ws.to_physical(us), nullptr};
    out.v = GridFunction{g, ws.to_physical(vs), nullptr};
    out.q_initial = state.q_initial;
    out.q_current = q_functional(make_potential_pair(out.u, out.v));
    return out;
}

}  // namespace fourops
