#pragma once

#include <string>
#include <vector>

#include "fourops/grid.hpp"

namespace fourops {

/// Portable closed-form vocabulary for potentials: a sum of terms, each a
/// coefficient times a product of factors base(scale*x)^power. This is the
/// shape the problem-spec JSON carries.
struct FormFactor {
    enum class Base { Const, Sech, Tanh, RecipSqrt2Cosh };
    Base base = Base::Const;
    double power = 1.0;
    double scale = 1.0;
};

struct FormTerm {
    double coef = 1.0;
    std::vector<FormFactor> factors;
};

struct ClosedForm {
    std::vector<FormTerm> terms;

    AnalyticFn fn() const;
    /// Limit as x -> -inf (side = -1) or +inf (side = +1).
    double limit(int side) const;
};

// Builders used by the catalog.
ClosedForm cf_const(double c);
/// c * sech(scale x)^power
FormTerm term_sech(double c, double power, double scale = 1.0);
/// c * (1/(sqrt(2)+cosh(scale x)))^power
FormTerm term_chi(double c, double power, double scale);
ClosedForm cf_sum(std::vector<FormTerm> terms);

}  // namespace fourops
