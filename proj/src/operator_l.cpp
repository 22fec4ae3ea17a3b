#include "fourops/operator_l.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fourops {

namespace {

constexpr int kHalfBand = 4;

// 4th-order central stencils (clamped truncation keeps the matrix symmetric).
constexpr double kD2[5] = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
constexpr double kD1[5] = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};

double band_get(const SymmetricOperatorMatrix& m, int i, int j) {
    if (i < j) std::swap(i, j);
    if (i - j > m.kd) return 0.0;
    return m.ab[static_cast<size_t>(m.kd + 1) * j + (i - j)];
}

void band_matvec(const SymmetricOperatorMatrix& m, const double* x, double* y) {
    for (int i = 0; i < m.n; ++i) y[i] = 0.0;
    for (int j = 0; j < m.n; ++j) {
        const double xj = x[j];
        const int imax = std::min(m.n - 1, j + m.kd);
        for (int i = j; i <= imax; ++i) {
            const double a = m.ab[static_cast<size_t>(m.kd + 1) * j + (i - j)];
            y[i] += a * xj;
            if (i != j) y[j] += a * x[i];
        }
    }
}

}  // namespace

double SymmetricOperatorMatrix::at(int i, int j) const { return band_get(*this, i, j); }

PotentialPair make_potential_pair(GridFunction u, GridFunction v, double u_left, double u_right,
                                  double v_left, double v_right) {
    if (!(u.grid == v.grid)) throw GridMismatchError("PotentialPair: u and v on different grids");
    return PotentialPair{std::move(u), std::move(v), u_left, u_right, v_left, v_right};
}

SymmetricOperatorMatrix assemble_L(const PotentialPair& pp) {
    const Grid& g = pp.u.grid;
    if (!(g == pp.v.grid)) throw GridMismatchError("assemble_L: u and v on different grids");
    if (g.periodic) throw SchemeMismatchError("assemble_L: eigenproblems use a non-periodic grid");
    const int n = g.n;
    const double h = g.spacing();
    const double h2 = h * h;

    SymmetricOperatorMatrix m;
    m.n = n;
    m.kd = kHalfBand;
    m.grid = g;
    m.ab.assign(static_cast<size_t>(kHalfBand + 1) * n, 0.0);

    auto add = [&](int i, int j, double val) {
        // lower storage: only i >= j entries are written
        m.ab[static_cast<size_t>(kHalfBand + 1) * j + (i - j)] += val;
    };

    for (int j = 0; j < n; ++j) {
        for (int i = j; i <= std::min(n - 1, j + kHalfBand); ++i) {
            double s = 0.0;
            // d^4 as D2*D2 (positive semidefinite by construction)
            for (int mm = std::max({0, i - 2, j - 2}); mm <= std::min({n - 1, i + 2, j + 2});
                 ++mm)
                s += kD2[mm - i + 2] * kD2[j - mm + 2] / (h2 * h2);
            // d u d as -D1^T diag(u) D1 (exactly symmetric)
            for (int mm = std::max({0, i - 2, j - 2}); mm <= std::min({n - 1, i + 2, j + 2});
                 ++mm)
                s -= kD1[i - mm + 2] * pp.u.values[mm] * kD1[j - mm + 2] / h2;
            if (i == j) s += pp.v.values[i];
            if (s != 0.0) add(i, j, s);
        }
    }
    return m;
}

namespace {

// Inverse iteration on the banded matrix for one eigenvalue; previously found
// vectors (same cluster or not) are projected out to keep the basis clean.
std::vector<double> banded_inverse_iteration(const SymmetricOperatorMatrix& m, double lambda,
                                             const std::vector<std::vector<double>>& prior,
                                             double matrix_scale) {
    const int n = m.n;
    const int kl = m.kd, ku = m.kd;
    const int ldab = 2 * kl + ku + 1;
    std::vector<double> ab(static_cast<size_t>(ldab) * n, 0.0);
    // general band storage of A - (lambda + tiny) I
    const double shift = lambda + 1e-11 * matrix_scale;
    for (int j = 0; j < n; ++j)
        for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
            double a = band_get(m, i, j);
            if (i == j) a -= shift;
            ab[static_cast<size_t>(ldab) * j + (kl + ku + i - j)] = a;
        }
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab.data(), ldab, ipiv.data());
    if (info < 0) throw SolverFailureError("dgbtrf failed");
    // info > 0 (exact singularity) cannot occur with the off-eigenvalue shift,
    // but treat it as failure if it does.
    if (info > 0) throw SolverFailureError("dgbtrf: singular shifted matrix");

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(0.7 * (i + 1)) + 0.3 * std::cos(1.3 * i);

    auto orthogonalize = [&](std::vector<double>& v) {
        for (const auto& p : prior) {
            double d = std::inner_product(v.begin(), v.end(), p.begin(), 0.0);
            for (int i = 0; i < n; ++i) v[i] -= d * p[i];
        }
    };
    auto normalize = [&](std::vector<double>& v) {
        double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (nrm == 0.0) throw SolverFailureError("inverse iteration: zero vector");
        for (double& e : v) e /= nrm;
    };

    orthogonalize(x);
    normalize(x);
    std::vector<double> y(n), r(n), best(x);
    // Iterate to the attainable floor (~eps * ||A||); a fixed loose tolerance
    // would leave O(1e-3) boundary contamination at fine resolutions.
    double best_res = 1e300;
    for (int it = 0; it < 40; ++it) {
        y = x;
        info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab.data(), ldab, ipiv.data(),
                              y.data(), n);
        if (info != 0) throw SolverFailureError("dgbtrs failed");
        orthogonalize(y);
        normalize(y);
        x = y;
        band_matvec(m, x.data(), r.data());
        double res = 0.0;
        for (int i = 0; i < n; ++i) res = std::max(res, std::abs(r[i] - lambda * x[i]));
        const bool improved = res < best_res;
        if (improved) {
            best_res = res;
            best = x;
        }
        if (res <= 1e-14 * matrix_scale) break;
        if (!improved && it >= 4) break;  // hit the roundoff floor
    }
    return best;
}

}  // namespace

SpectrumResult lowest_eigenpairs(const SymmetricOperatorMatrix& m, int k) {
    if (k < 1) throw SolverFailureError("lowest_eigenpairs: k must be >= 1");
    const int n = m.n;
    if (k > n) throw SolverFailureError("lowest_eigenpairs: k exceeds matrix dimension");

    // Eigenvalues via the banded QR path (no eigenvector accumulation).
    std::vector<double> ab(m.ab);
    std::vector<double> w(n), q(1);
    std::vector<double> z(1);
    lapack_int found = 0;
    std::vector<lapack_int> ifail(n);
    lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, 'N', 'I', 'L', n, m.kd, ab.data(), m.kd + 1, q.data(), n, 0.0, 0.0, 1,
        k, 2.0 * LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, ifail.data());
    if (info != 0 || found < k) throw SolverFailureError("dsbevx did not converge");

    double matrix_scale = 0.0;
    for (double a : m.ab) matrix_scale = std::max(matrix_scale, std::abs(a));

    SpectrumResult res;
    res.eigenvalues.assign(w.begin(), w.begin() + k);

    std::vector<std::vector<double>> vecs;
    for (int i = 0; i < k; ++i)
        vecs.push_back(banded_inverse_iteration(m, res.eigenvalues[i], vecs, matrix_scale));

    // Degeneracy groups by chained clustering.
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < k; ++i) {
        if (!groups.empty()) {
            int prev = groups.back().back();
            if (std::abs(res.eigenvalues[i] - res.eigenvalues[prev]) <
                cluster_tol(res.eigenvalues[i])) {
                groups.back().push_back(i);
                continue;
            }
        }
        groups.push_back({i});
    }
    res.degeneracy_groups = groups;

    const double h = m.grid.spacing();
    const int mid = n / 2;
    auto value_near_mid = [&](const std::vector<double>& v) {
        // first component not negligible scanning outward from the midpoint
        double scale = 0.0;
        for (double e : v) scale = std::max(scale, std::abs(e));
        for (int d = 0; d <= n; ++d) {
            for (int s : {mid + d, mid - d}) {
                if (s < 0 || s >= n) continue;
                if (std::abs(v[s]) > 1e-8 * scale) return v[s];
            }
        }
        return v[mid];
    };

    // Within each group: L2 orthonormalize, then fix the gauge. For a
    // degenerate pair, rotate so the second function vanishes at the grid
    // midpoint and the first is positive there; any SO(2) choice is valid,
    // determinism is what matters.
    for (const auto& grp : groups) {
        if (grp.size() == 2) {
            auto& a = vecs[grp[0]];
            auto& b = vecs[grp[1]];
            const double c0 = a[mid], s0 = b[mid];
            if (std::hypot(c0, s0) > 1e-10) {
                const double th = std::atan2(s0, c0);
                const double ct = std::cos(th), st = std::sin(th);
                std::vector<double> na(n), nb(n);
                for (int i = 0; i < n; ++i) {
                    na[i] = ct * a[i] + st * b[i];
                    nb[i] = -st * a[i] + ct * b[i];
                }
                a = std::move(na);
                b = std::move(nb);
            }
        }
        for (size_t gi = 0; gi < grp.size(); ++gi) {
            auto& v = vecs[grp[gi]];
            // re-orthogonalize inside the group under the same inner product
            for (size_t gj = 0; gj < gi; ++gj) {
                const auto& p = vecs[grp[gj]];
                double d = h * std::inner_product(v.begin(), v.end(), p.begin(), 0.0);
                for (int i = 0; i < n; ++i) v[i] -= d * p[i];
            }
            double nrm = std::sqrt(h * std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            for (double& e : v) e /= nrm;
            if (value_near_mid(v) < 0.0)
                for (double& e : v) e = -e;
        }
    }

    for (int i = 0; i < k; ++i) {
        GridFunction gf;
        gf.grid = m.grid;
        gf.values = std::move(vecs[i]);
        res.eigenfunctions.push_back(std::move(gf));
    }
    return res;
}

namespace {

// Derivative of gf per scheme, degrading analytic_passthrough to central_fd4
// when no model is attached (numerically computed eigenfunctions).
GridFunction deriv(const GridFunction& gf, int order, DiffScheme scheme) {
    if (scheme == DiffScheme::analytic_passthrough && !gf.has_model())
        scheme = DiffScheme::central_fd4;
    return differentiate(gf, order, scheme);
}

}  // namespace

GridFunction apply_A(const FactorizationData& fac, const GridFunction& psi, DiffScheme scheme) {
    const Grid& g = psi.grid;
    if (!(fac.f.grid == g) || !(fac.g.grid == g))
        throw GridMismatchError("apply_A: operands on different grids");
    if (scheme == DiffScheme::analytic_passthrough && psi.has_model() && fac.f.has_model() &&
        fac.g.has_model()) {
        AnalyticFn pf = *psi.model, ff = *fac.f.model, gf = *fac.g.model;
        return sample(g, [pf, ff, gf](double x) {
            Jet p = pf(x);
            return -jet_derivative(jet_derivative(p)) + ff(x) * jet_derivative(p) + gf(x) * p;
        });
    }
    GridFunction p1 = deriv(psi, 1, scheme);
    GridFunction p2 = deriv(psi, 2, scheme);
    return pointwise(g, {&p2, &fac.f, &p1, &fac.g, &psi}, [](const std::vector<double>& a) {
        return -a[0] + a[1] * a[2] + a[3] * a[4];
    });
}

GridFunction apply_A_star(const FactorizationData& fac, const GridFunction& psi,
                          DiffScheme scheme) {
    const Grid& g = psi.grid;
    if (!(fac.f.grid == g) || !(fac.g.grid == g))
        throw GridMismatchError("apply_A_star: operands on different grids");
    if (scheme == DiffScheme::analytic_passthrough && psi.has_model() && fac.f.has_model() &&
        fac.g.has_model()) {
        AnalyticFn pf = *psi.model, ff = *fac.f.model, gf = *fac.g.model;
        return sample(g, [pf, ff, gf](double x) {
            Jet p = pf(x);
            Jet f = ff(x);
            return -jet_derivative(jet_derivative(p)) - f * jet_derivative(p) +
                   (gf(x) - jet_derivative(f)) * p;
        });
    }
    GridFunction p1 = deriv(psi, 1, scheme);
    GridFunction p2 = deriv(psi, 2, scheme);
    GridFunction fp = deriv(fac.f, 1, scheme);
    return pointwise(g, {&p2, &fac.f, &p1, &fac.g, &fp, &psi}, [](const std::vector<double>& a) {
        return -a[0] - a[1] * a[2] + (a[3] - a[4]) * a[5];
    });
}

GridFunction apply_L(const PotentialPair& pp, const GridFunction& psi, DiffScheme scheme) {
    const Grid& g = psi.grid;
    if (!(pp.u.grid == g)) throw GridMismatchError("apply_L: operands on different grids");
    if (scheme == DiffScheme::analytic_passthrough && psi.has_model() && pp.u.has_model() &&
        pp.v.has_model()) {
        AnalyticFn pf = *psi.model, uf = *pp.u.model, vf = *pp.v.model;
        return sample(g, [pf, uf, vf](double x) {
            Jet p = pf(x);
            Jet p1 = jet_derivative(p);
            Jet u = uf(x);
            return jet_derivative(jet_derivative(jet_derivative(p1))) +
                   jet_derivative(u * p1) + vf(x) * p;
        });
    }
    GridFunction p1 = deriv(psi, 1, scheme);
    GridFunction p2 = deriv(psi, 2, scheme);
    GridFunction p4 = deriv(psi, 4, scheme);
    GridFunction u1 = deriv(pp.u, 1, scheme);
    return pointwise(g, {&p4, &u1, &p1, &pp.u, &p2, &pp.v, &psi},
                     [](const std::vector<double>& a) {
                         return a[0] + a[1] * a[2] + a[3] * a[4] + a[5] * a[6];
                     });
}

std::pair<double, double> factorization_identity_residuals(const PotentialPair& pp,
                                                           const FactorizationData& fac,
                                                           DiffScheme scheme) {
    const Grid& g = pp.u.grid;
    GridFunction fp = deriv(fac.f, 1, scheme);
    GridFunction gp = deriv(fac.g, 1, scheme);
    GridFunction r1 = pointwise(g, {&fp, &fac.f, &fac.g, &pp.u}, [](const std::vector<double>& a) {
        return a[0] + a[1] * a[1] + 2.0 * a[2] + a[3];
    });
    // (fg + g')' expanded as f'g + fg' + g''
    GridFunction gpp = deriv(fac.g, 2, scheme);
    GridFunction r2 = pointwise(
        g, {&fac.g, &fp, &fac.f, &gp, &gpp, &pp.v}, [E0 = fac.E0](const std::vector<double>& a) {
            return a[0] * a[0] - (a[1] * a[0] + a[2] * a[3] + a[4]) - a[5] + E0;
        });
    return {sup_norm(r1), sup_norm(r2)};
}

double factorization_residual(const PotentialPair& pp, const FactorizationData& fac,
                              const std::vector<GridFunction>& probes, DiffScheme scheme) {
    double worst = 0.0;
    for (const GridFunction& phi : probes) {
        GridFunction Aphi = apply_A(fac, phi, scheme);
        GridFunction AsA = apply_A_star(fac, Aphi, scheme);
        GridFunction Lphi = apply_L(pp, phi, scheme);
        GridFunction diff = pointwise(phi.grid, {&AsA, &phi, &Lphi},
                                      [E0 = fac.E0](const std::vector<double>& a) {
                                          return a[0] + E0 * a[1] - a[2];
                                      });
        double denom = sup_norm(phi);
        if (denom == 0.0) continue;
        worst = std::max(worst, sup_norm(diff) / denom);
    }
    auto [r1, r2] = factorization_identity_residuals(pp, fac, scheme);
    return std::max({worst, r1, r2});
}

double inner_product(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid == b.grid)) throw GridMismatchError("inner_product: grids differ");
    GridFunction prod = pointwise(a.grid, {&a, &b},
                                  [](const std::vector<double>& v) { return v[0] * v[1]; });
    return integrate(prod);
}

}  // namespace fourops
