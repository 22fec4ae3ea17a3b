#pragma once

#include <memory>
#include <vector>

#include "fourops/errors.hpp"
#include "fourops/jet.hpp"

namespace fourops {

/// Uniform 1-D grid. Non-periodic grids include both endpoints
/// (h = (x_max-x_min)/(n-1)); periodic grids exclude x_max (h = L/n).
struct Grid {
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;
    bool periodic = false;

    double spacing() const {
        return (x_max - x_min) / (periodic ? n : n - 1);
    }
    double point(int i) const { return x_min + i * spacing(); }
    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = point(i);
        return xs;
    }
    bool operator==(const Grid& o) const = default;
};

Grid make_uniform_grid(double x_min, double x_max, int n, bool periodic);

enum class DiffScheme {
    central_fd4,          // 4th-order finite differences, one-sided at boundaries
    periodic_spectral,    // FFT differentiation on periodic grids
    analytic_passthrough  // closed-form derivatives carried by the GridFunction
};

/// Real samples on a grid, optionally backed by a closed-form model that can
/// produce exact derivatives (used by the catalog fixtures).
struct GridFunction {
    Grid grid;
    std::vector<double> values;
    std::shared_ptr<AnalyticFn> model;  // null for purely sampled data

    bool has_model() const { return model != nullptr; }
};

/// Sample a closed form on a grid, keeping the model attached.
GridFunction sample(const Grid& grid, AnalyticFn fn);

/// Samples-only constructor with validation.
GridFunction from_samples(const Grid& grid, std::vector<double> values);

GridFunction differentiate(const GridFunction& gf, int order, DiffScheme scheme);

double integrate(const GridFunction& gf);

/// Finite-difference weights for the m-th derivative at evaluation point z
/// given nodes xs (Fornberg's algorithm).
std::vector<double> fornberg_weights(double z, const std::vector<double>& xs, int m);

// Small conveniences used throughout the test and residual code.
double sup_norm(const GridFunction& gf);
GridFunction pointwise(const Grid& g, const std::vector<const GridFunction*>& inputs,
                       const std::function<double(const std::vector<double>&)>& f);

}  // namespace fourops
