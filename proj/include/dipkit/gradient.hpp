#pragma once

#include "dipkit/dip.hpp"
#include "dipkit/pvalue.hpp"

#include <Eigen/Core>

namespace dipkit {

struct GradientResult {
    Eigen::VectorXd dip_gradient;
    Eigen::VectorXd pvalue_gradient;  // empty when only the dip part was requested
    double dip = 0.0;
    double pvalue = 1.0;
};

/// Gradient of the dip of the projection `data * axis` with respect to the axis.
/// Throws NoGradient without a modal triangle, DegenerateProjection when the
/// triangle's outer points coincide.
GradientResult dip_gradient(const Eigen::MatrixXd& data, const ProjectionAxis& axis);

/// Adds the p-value and its gradient (chain rule through the sigmoid) to dip_gradient.
GradientResult pvalue_gradient(const Eigen::MatrixXd& data, const ProjectionAxis& axis,
                               const SigmoidShape& shape = {}, const BCoefficients& coeffs = {});

namespace detail {

/// Dip gradient for a projection and dip that were already computed from `data`.
Eigen::VectorXd dip_gradient_at(const Eigen::MatrixXd& data, const Projection& proj, const DipResult& dr);

}  // namespace detail

}  // namespace dipkit
