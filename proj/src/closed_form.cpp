#include "fourops/closed_form.hpp"

#include <cmath>

namespace fourops {

AnalyticFn ClosedForm::fn() const {
    std::vector<FormTerm> ts = terms;
    return [ts](double x) {
        Jet sum;
        for (const FormTerm& t : ts) {
            Jet prod = Jet::constant(t.coef);
            for (const FormFactor& f : t.factors) {
                Jet arg = Jet::variable(x) * f.scale;
                Jet base;
                switch (f.base) {
                    case FormFactor::Base::Const:
                        base = Jet::constant(1.0);
                        break;
                    case FormFactor::Base::Sech:
                        base = sech(arg);
                        break;
                    case FormFactor::Base::Tanh:
                        base = tanh(arg);
                        break;
                    case FormFactor::Base::RecipSqrt2Cosh:
                        base = 1.0 / (std::sqrt(2.0) + cosh(arg));
                        break;
                }
                if (f.base == FormFactor::Base::Tanh)
                    prod = prod * powi(base, static_cast<int>(f.power));
                else
                    prod = prod * pow(base, f.power);
            }
            sum += prod;
        }
        return sum;
    };
}

double ClosedForm::limit(int side) const {
    double sum = 0.0;
    for (const FormTerm& t : terms) {
        double prod = t.coef;
        for (const FormFactor& f : t.factors) {
            switch (f.base) {
                case FormFactor::Base::Const:
                    break;
                case FormFactor::Base::Sech:
                case FormFactor::Base::RecipSqrt2Cosh:
                    prod *= (f.power > 0.0) ? 0.0 : 1.0;
                    break;
                case FormFactor::Base::Tanh: {
                    double l = (side >= 0) == (f.scale >= 0) ? 1.0 : -1.0;
                    prod *= std::pow(l, f.power);
                    break;
                }
            }
        }
        sum += prod;
    }
    return sum;
}

ClosedForm cf_const(double c) {
    if (c == 0.0) return ClosedForm{};
    return ClosedForm{{FormTerm{c, {}}}};
}

FormTerm term_sech(double c, double power, double scale) {
    return FormTerm{c, {FormFactor{FormFactor::Base::Sech, power, scale}}};
}

FormTerm term_chi(double c, double power, double scale) {
    return FormTerm{c, {FormFactor{FormFactor::Base::RecipSqrt2Cosh, power, scale}}};
}

ClosedForm cf_sum(std::vector<FormTerm> terms) { return ClosedForm{std::move(terms)}; }

}  // namespace fourops
