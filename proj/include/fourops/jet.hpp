#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace fourops {

/// Truncated Taylor series (a "jet") of a smooth function at a point,
/// carrying coefficients f^(k)(x0)/k! for k = 0..MaxOrder. Arithmetic on
/// jets propagates derivatives exactly, so closed-form profiles can supply
/// machine-precision derivatives of any order up to MaxOrder.
class Jet {
public:
    static constexpr int kOrder = 8;  // coefficients 0..8, derivatives to 8th

    Jet() { c_.fill(0.0); }

    static Jet constant(double a) {
        Jet j;
        j.c_[0] = a;
        return j;
    }

    /// The identity function x at expansion point x0.
    static Jet variable(double x0) {
        Jet j;
        j.c_[0] = x0;
        j.c_[1] = 1.0;
        return j;
    }

    double value() const { return c_[0]; }

    /// k-th derivative at the expansion point.
    double derivative(int k) const {
        if (k < 0 || k > kOrder) throw std::out_of_range("Jet::derivative: order out of range");
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c_[k] * fact;
    }

    double coeff(int k) const { return c_[k]; }
    double& coeff(int k) { return c_[k]; }

    Jet operator-() const {
        Jet r;
        for (int k = 0; k <= kOrder; ++k) r.c_[k] = -c_[k];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (int k = 0; k <= kOrder; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (int k = 0; k <= kOrder; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int k = 0; k <= kOrder; ++k) c_[k] *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { a.c_[0] += b; return a; }
    friend Jet operator+(double b, Jet a) { a.c_[0] += b; return a; }
    friend Jet operator-(Jet a, double b) { a.c_[0] -= b; return a; }
    friend Jet operator-(double b, const Jet& a) { return -a + b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= kOrder; ++k) {
            double s = 0.0;
            for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == 0.0) throw std::domain_error("Jet: division by jet with zero value");
        Jet r;
        for (int k = 0; k <= kOrder; ++k) {
            double s = a.c_[k];
            for (int i = 0; i < k; ++i) s -= r.c_[i] * b.c_[k - i];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

    friend Jet operator/(double a, const Jet& b) { return constant(a) / b; }

private:
    std::array<double, kOrder + 1> c_;
};

/// Jet of the derivative function f'. The top coefficient is lost, so the
/// result is valid to order kOrder-1.
inline Jet jet_derivative(const Jet& f) {
    Jet r;
    for (int k = 0; k < Jet::kOrder; ++k) r.coeff(k) = (k + 1) * f.coeff(k + 1);
    return r;
}

inline Jet exp(const Jet& g) {
    Jet e;
    e.coeff(0) = std::exp(g.value());
    for (int k = 1; k <= Jet::kOrder; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * g.coeff(j) * e.coeff(k - j);
        e.coeff(k) = s / k;
    }
    return e;
}

inline Jet log(const Jet& g) {
    if (g.value() <= 0.0) throw std::domain_error("Jet: log of non-positive value");
    Jet r;
    r.coeff(0) = std::log(g.value());
    // g' = g * r'  =>  k g_k = sum_{j=1..k} j r_j g_{k-j}
    for (int k = 1; k <= Jet::kOrder; ++k) {
        double s = k * g.coeff(k);
        for (int j = 1; j < k; ++j) s -= j * r.coeff(j) * g.coeff(k - j);
        r.coeff(k) = s / (k * g.coeff(0));
    }
    return r;
}

namespace detail {
// sin/cos and sinh/cosh share the coupled recurrence; sign = -1 for circular.
inline void sincos_pair(const Jet& g, Jet& s, Jet& c, double sign, double s0, double c0) {
    s.coeff(0) = s0;
    c.coeff(0) = c0;
    for (int k = 1; k <= Jet::kOrder; ++k) {
        double as = 0.0, ac = 0.0;
        for (int j = 1; j <= k; ++j) {
            as += j * g.coeff(j) * c.coeff(k - j);
            ac += j * g.coeff(j) * s.coeff(k - j);
        }
        s.coeff(k) = as / k;
        c.coeff(k) = sign * ac / k;
    }
}
}  // namespace detail

inline Jet sin(const Jet& g) {
    Jet s, c;
    detail::sincos_pair(g, s, c, -1.0, std::sin(g.value()), std::cos(g.value()));
    return s;
}

inline Jet cos(const Jet& g) {
    Jet s, c;
    detail::sincos_pair(g, s, c, -1.0, std::sin(g.value()), std::cos(g.value()));
    return c;
}

inline Jet sinh(const Jet& g) {
    Jet s, c;
    detail::sincos_pair(g, s, c, 1.0, std::sinh(g.value()), std::cosh(g.value()));
    return s;
}

inline Jet cosh(const Jet& g) {
    Jet s, c;
    detail::sincos_pair(g, s, c, 1.0, std::sinh(g.value()), std::cosh(g.value()));
    return c;
}

inline Jet tanh(const Jet& g) { return sinh(g) / cosh(g); }
inline Jet sech(const Jet& g) { return 1.0 / cosh(g); }

inline Jet sqrt(const Jet& g) {
    if (g.value() <= 0.0) throw std::domain_error("Jet: sqrt of non-positive value");
    Jet r;
    r.coeff(0) = std::sqrt(g.value());
    for (int k = 1; k <= Jet::kOrder; ++k) {
        double s = g.coeff(k);
        for (int j = 1; j < k; ++j) s -= r.coeff(j) * r.coeff(k - j);
        r.coeff(k) = s / (2.0 * r.coeff(0));
    }
    return r;
}

/// Integer power by repeated multiplication (handles non-positive bases).
inline Jet powi(const Jet& g, int p) {
    if (p < 0) return 1.0 / powi(g, -p);
    Jet r = Jet::constant(1.0);
    Jet base = g;
    while (p > 0) {
        if (p & 1) r = r * base;
        base = base * base;
        p >>= 1;
    }
    return r;
}

/// Real power via exp(p log g); requires g > 0.
inline Jet pow(const Jet& g, double p) {
    double ip;
    if (std::modf(p, &ip) == 0.0 && std::abs(p) < 64) return powi(g, static_cast<int>(ip));
    return exp(p * log(g));
}

/// A scalar profile with all derivatives: x -> jet of f at x.
using AnalyticFn = std::function<Jet(double)>;

}  // namespace fourops
