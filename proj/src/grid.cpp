#include "fourops/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

namespace fourops {

Grid make_uniform_grid(double x_min, double x_max, int n, bool periodic) {
    if (!(x_min < x_max)) throw InvalidRangeError("make_uniform_grid: x_min must be < x_max");
    if (n < 16) throw TooFewPointsError("make_uniform_grid: n must be >= 16");
    return Grid{x_min, x_max, n, periodic};
}

GridFunction sample(const Grid& grid, AnalyticFn fn) {
    GridFunction gf;
    gf.grid = grid;
    gf.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) gf.values[i] = fn(grid.point(i)).value();
    gf.model = std::make_shared<AnalyticFn>(std::move(fn));
    return gf;
}

GridFunction from_samples(const Grid& grid, std::vector<double> values) {
    if (static_cast<int>(values.size()) != grid.n)
        throw GridMismatchError("from_samples: value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw BadSpecError("from_samples: non-finite sample");
    return GridFunction{grid, std::move(values), nullptr};
}

std::vector<double> fornberg_weights(double z, const std::vector<double>& xs, int m) {
    const int nd = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nd + 1);
    for (int i = 0; i <= nd; ++i) w[i] = c[i][m];
    return w;
}

namespace {

// Half-width of the centered 4th-order stencil for the m-th derivative.
int central_half_width(int m) {
    switch (m) {
        case 1: return 2;
        case 2: return 2;
        case 3: return 3;
        case 4: return 3;
        case 5: return 4;
        default: throw UnsupportedOrderError("differentiate: order must be 1..5");
    }
}

GridFunction diff_fd4(const GridFunction& gf, int m) {
    const Grid& g = gf.grid;
    const int n = g.n;
    if (n < 9) throw TooFewPointsError("central_fd4 requires n >= 9");
    const double h = g.spacing();
    const int r = central_half_width(m);

    // Centered weights at integer offsets -r..r.
    std::vector<double> nodes(2 * r + 1);
    for (int i = 0; i <= 2 * r; ++i) nodes[i] = static_cast<double>(i - r);
    std::vector<double> wc = fornberg_weights(0.0, nodes, m);
    const double hm = std::pow(h, m);

    GridFunction out;
    out.grid = g;
    out.values.assign(n, 0.0);

    if (g.periodic) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = -r; j <= r; ++j) {
                int idx = i + j;
                idx %= n;
                if (idx < 0) idx += n;
                s += wc[j + r] * gf.values[idx];
            }
            out.values[i] = s / hm;
        }
        return out;
    }

    // One-sided 4th-order stencils near the edges: m+4 nodes anchored at the
    // boundary, evaluated at the point itself.
    const int ns = m + 4;
    for (int i = 0; i < n; ++i) {
        if (i >= r && i < n - r) {
            double s = 0.0;
            for (int j = -r; j <= r; ++j) s += wc[j + r] * gf.values[i + j];
            out.values[i] = s / hm;
        } else {
            const int start = (i < r) ? 0 : n - ns;
            std::vector<double> nd(ns);
            for (int j = 0; j < ns; ++j) nd[j] = static_cast<double>(start + j - i);
            std::vector<double> w = fornberg_weights(0.0, nd, m);
            double s = 0.0;
            for (int j = 0; j < ns; ++j) s += w[j] * gf.values[start + j];
            out.values[i] = s / hm;
        }
    }
    return out;
}

std::mutex fftw_mutex;  // FFTW plan creation is not thread-safe

GridFunction diff_spectral(const GridFunction& gf, int m) {
    const Grid& g = gf.grid;
    if (!g.periodic) throw SchemeMismatchError("periodic_spectral requires a periodic grid");
    const int n = g.n;
    const int nc = n / 2 + 1;
    const double len = g.x_max - g.x_min;

    std::vector<double> in(gf.values);
    std::vector<std::complex<double>> spec(nc);
    std::vector<double> outv(n);

    fftw_plan pf, pb;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        pf = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                  FFTW_ESTIMATE);
        pb = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec.data()), outv.data(),
                                  FFTW_ESTIMATE);
    }
    fftw_execute(pf);
    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j < nc; ++j) {
        double k = 2.0 * M_PI * j / len;
        // The Nyquist mode has no well-defined odd derivative; drop it.
        if (j == n / 2 && n % 2 == 0 && m % 2 == 1) {
            spec[j] = 0.0;
            continue;
        }
        std::complex<double> ik = std::pow(I * k, m);
        spec[j] *= ik / static_cast<double>(n);
    }
    fftw_execute(pb);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(pf);
        fftw_destroy_plan(pb);
    }
    GridFunction out;
    out.grid = g;
    out.values = std::move(outv);
    return out;
}

}  // namespace

GridFunction differentiate(const GridFunction& gf, int order, DiffScheme scheme) {
    if (order < 1 || order > 5) throw UnsupportedOrderError("differentiate: order must be 1..5");
    switch (scheme) {
        case DiffScheme::central_fd4:
            return diff_fd4(gf, order);
        case DiffScheme::periodic_spectral:
            return diff_spectral(gf, order);
        case DiffScheme::analytic_passthrough: {
            if (!gf.has_model())
                throw SchemeMismatchError("analytic_passthrough requires a model-backed function");
            AnalyticFn base = *gf.model;
            AnalyticFn derived = [base, order](double x) {
                Jet j = base(x);
                for (int k = 0; k < order; ++k) j = jet_derivative(j);
                return j;
            };
            return sample(gf.grid, derived);
        }
    }
    throw UnsupportedOrderError("differentiate: unknown scheme");
}

double integrate(const GridFunction& gf) {
    const Grid& g = gf.grid;
    const double h = g.spacing();
    const int n = g.n;
    if (g.periodic) {
        double s = 0.0;
        for (double v : gf.values) s += v;
        return s * h;
    }
    // Composite Simpson; if the interval count is odd, close with the 3/8 rule.
    const int intervals = n - 1;
    double s = 0.0;
    int last = intervals;
    if (intervals % 2 != 0) last = intervals - 3;
    for (int i = 0; i + 2 <= last; i += 2)
        s += (h / 3.0) * (gf.values[i] + 4.0 * gf.values[i + 1] + gf.values[i + 2]);
    if (intervals % 2 != 0) {
        const int i = last;
        s += (3.0 * h / 8.0) * (gf.values[i] + 3.0 * gf.values[i + 1] + 3.0 * gf.values[i + 2] +
                                gf.values[i + 3]);
    }
    return s;
}

double sup_norm(const GridFunction& gf) {
    double m = 0.0;
    for (double v : gf.values) m = std::max(m, std::abs(v));
    return m;
}

GridFunction pointwise(const Grid& g, const std::vector<const GridFunction*>& inputs,
                       const std::function<double(const std::vector<double>&)>& f) {
    for (const GridFunction* in : inputs)
        if (!(in->grid == g)) throw GridMismatchError("pointwise: inputs on different grids");
    GridFunction out;
    out.grid = g;
    out.values.resize(g.n);
    std::vector<double> args(inputs.size());
    for (int i = 0; i < g.n; ++i) {
        for (size_t j = 0; j < inputs.size(); ++j) args[j] = inputs[j]->values[i];
        out.values[i] = f(args);
    }
    return out;
}

}  // namespace fourops
