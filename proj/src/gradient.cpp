#include "dipkit/gradient.hpp"

#include "dipkit/errors.hpp"

namespace dipkit {

namespace detail {

Eigen::VectorXd dip_gradient_at(const Eigen::MatrixXd& data, const Projection& proj, const DipResult& dr) {
    if (!dr.modal_triangle) throw NoGradient("dip has no modal triangle");

    const auto [i1, i2, i3] = *dr.modal_triangle;
    const double n = static_cast<double>(proj.sample.size());
    const double y1 = proj.sample[i1];
    const double y2 = proj.sample[i2];
    const double y3 = proj.sample[i3];
    const double dy = y3 - y1;
    if (dy == 0.0) throw DegenerateProjection("modal triangle collapses to a single projected value");

    const double h21 = static_cast<double>(i2 - i1) / n;
    const double h31 = static_cast<double>(i3 - i1) / n;
    // Signed gap between the middle point and the chord; positive on the convex side.
    const double gap = h21 - h31 * (y2 - y1) / dy;
    const double sign = gap >= 0.0 ? 1.0 : -1.0;

    const auto r1 = static_cast<Eigen::Index>(proj.order[i1]);
    const auto r2 = static_cast<Eigen::Index>(proj.order[i2]);
    const auto r3 = static_cast<Eigen::Index>(proj.order[i3]);
    const Eigen::VectorXd x21 = (data.row(r2) - data.row(r1)).transpose();
    const Eigen::VectorXd x31 = (data.row(r3) - data.row(r1)).transpose();
    return 0.5 * sign * (-h31) * (x21 * dy - (y2 - y1) * x31) / (dy * dy);
}

}  // namespace detail

GradientResult dip_gradient(const Eigen::MatrixXd& data, const ProjectionAxis& axis) {
    const Projection proj = project_and_sort(data, axis);
    const DipResult dr = compute_dip(proj.sample);
    GradientResult out;
    out.dip = dr.dip;
    out.dip_gradient = detail::dip_gradient_at(data, proj, dr);
    return out;
}

GradientResult pvalue_gradient(const Eigen::MatrixXd& data, const ProjectionAxis& axis,
                               const SigmoidShape& shape, const BCoefficients& coeffs) {
    GradientResult out = dip_gradient(data, axis);
    const double b = b_of_n(static_cast<std::size_t>(data.rows()), coeffs);
    out.pvalue = sigmoid_pvalue(out.dip, b, shape);
    out.pvalue_gradient = sigmoid_pvalue_derivative(out.dip, b, shape) * out.dip_gradient;
    return out;
}

}  // namespace dipkit
