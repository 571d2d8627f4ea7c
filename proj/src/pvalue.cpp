#include "dipkit/pvalue.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dipkit {

namespace {

// Largest dip accepted as 0.25 after floating-point round-off.
constexpr double kMaxDip = 0.25 + 1e-12;

// (1 + c * e^z)^(1/c), evaluated in log space so huge terms saturate to inf
// instead of producing NaN.
double power_term(double c, double z) {
    if (z < -700.0) return 1.0;
    const double e = std::exp(z);
    return std::exp(std::log1p(c * e) / c);
}

}  // namespace

void SigmoidShape::validate() const {
    if (!(std::isfinite(w) && std::isfinite(h) && std::isfinite(k) && std::isfinite(s) &&
          std::isfinite(u))) {
        throw InvalidInput("sigmoid shape has non-finite parameters");
    }
    if (!(w > 0.0 && w < 1.0)) throw InvalidInput("sigmoid weight w must lie in (0,1)");
    if (!(h > 0.0)) throw InvalidInput("sigmoid curvature h must be positive");
    if (!(k > 0.0)) throw InvalidInput("sigmoid curvature k must be positive");
}

void BCoefficients::validate() const {
    if (!(std::isfinite(b1) && std::isfinite(b2))) throw InvalidInput("b coefficients must be finite");
    if (!(b1 > 0.0)) throw InvalidInput("b1 must be positive");
}

double b_of_n(std::size_t n, const BCoefficients& coeffs) {
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    return coeffs.b1 * std::sqrt(static_cast<double>(n)) + coeffs.b2;
}

double sigmoid_pvalue(double dip, double b, const SigmoidShape& shape) {
    const double t1 = power_term(shape.h, -b * dip + shape.s);
    const double t2 = power_term(shape.k, -b * dip + shape.u);
    const double bracket = shape.w * t1 + (1.0 - shape.w) * t2;
    if (!std::isfinite(bracket)) return 1.0;
    return std::clamp(1.0 - 1.0 / bracket, 0.0, 1.0);
}

double sigmoid_pvalue_derivative(double dip, double b, const SigmoidShape& shape) {
    const double z1 = -b * dip + shape.s;
    const double z2 = -b * dip + shape.u;
    const double e1 = z1 < -700.0 ? 0.0 : std::exp(z1);
    const double e2 = z2 < -700.0 ? 0.0 : std::exp(z2);
    const double base1 = 1.0 + shape.h * e1;
    const double base2 = 1.0 + shape.k * e2;
    const double bracket = shape.w * std::pow(base1, 1.0 / shape.h) +
                           (1.0 - shape.w) * std::pow(base2, 1.0 / shape.k);
    if (!std::isfinite(bracket)) return 0.0;
    const double dbracket = shape.w * std::pow(base1, 1.0 / shape.h - 1.0) * (-b * e1) +
                            (1.0 - shape.w) * std::pow(base2, 1.0 / shape.k - 1.0) * (-b * e2);
    return dbracket / (bracket * bracket);
}

double pvalue_function(double dip, std::size_t n, const SigmoidShape& shape,
                       const BCoefficients& coeffs) {
    if (!(dip > 0.0 && dip <= kMaxDip)) {
        throw InvalidInput("dip must lie in (0, 0.25], got " + std::to_string(dip));
    }
    return sigmoid_pvalue(dip, b_of_n(n, coeffs), shape);
}

}  // namespace dipkit
