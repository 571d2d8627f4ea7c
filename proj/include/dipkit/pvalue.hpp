#pragma once

#include <cstddef>

namespace dipkit {

/// Shape constants of the two-term sigmoid that maps a dip to a p-value.
struct SigmoidShape {
    double w = 0.6;
    double h = 1.6;
    double k = 0.2;
    double s = 6.5;
    double u = 6.5;

    /// Throws InvalidInput unless w in (0,1), h > 0, k > 0 and all finite.
    void validate() const;
};

/// Coefficients of the slope b(n) = b1 * sqrt(n) + b2.
struct BCoefficients {
    double b1 = 17.30784;
    double b2 = 12.04918;

    void validate() const;
};

double b_of_n(std::size_t n, const BCoefficients& coeffs = {});

/// Evaluates the sigmoid for an arbitrary slope b. No range checks on dip,
/// which makes it usable during fitting.
double sigmoid_pvalue(double dip, double b, const SigmoidShape& shape);

/// d p / d dip of sigmoid_pvalue at fixed b.
double sigmoid_pvalue_derivative(double dip, double b, const SigmoidShape& shape);

/// Closed-form p-value. Requires 0 < dip <= 0.25 and n >= 1.
double pvalue_function(double dip, std::size_t n, const SigmoidShape& shape = {},
                       const BCoefficients& coeffs = {});

}  // namespace dipkit
