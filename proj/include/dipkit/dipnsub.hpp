#pragma once

#include "dipkit/clustering.hpp"
#include "dipkit/dip.hpp"
#include "dipkit/pvalue.hpp"
#include "dipkit/significance.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace dipkit {

struct SgdConfig {
    double step_size = 0.1;
    double momentum = 0.95;
    std::size_t max_iters = 200;
    double convergence_tol = 1e-6;

    void validate() const;
};

struct DipnSubConfig {
    SignificanceConfig significance;
    /// Fraction of samples that must sit in multimodal clusters to accept an axis.
    double threshold = 0.15;
    SgdConfig sgd;
    /// Keep TailoredDip's noise labels instead of assigning them to clusters.
    bool keep_outliers = false;

    void validate() const;
};

struct SubspaceResult {
    ClusterLabels labels;
    /// Accepted axes in original feature coordinates, unit norm, mutually orthogonal.
    std::vector<Eigen::VectorXd> axes;
    /// Data projected onto `axes`, one column per axis.
    Eigen::MatrixXd projected;
    /// Objective value of each accepted axis.
    std::vector<double> costs;
};

struct AxisOptimum {
    ProjectionAxis axis;
    double cost = 1.0;
    std::size_t iterations = 0;
};

/// Size-weighted mean of the closed-form p-values of each cluster projected on
/// `axis`. Noise samples are ignored; clusters with at most 3 samples count as p = 1.
double weighted_pvalue_cost(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                            const ProjectionAxis& axis, const SigmoidShape& shape = {},
                            const BCoefficients& coeffs = {});

/// The q = max(1, round(ln d)) feature axes of lowest cost followed by the first
/// q principal axes.
std::vector<ProjectionAxis> candidate_axes(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                                           const SigmoidShape& shape = {}, const BCoefficients& coeffs = {});

/// Momentum gradient descent on the weighted cost, returning the best axis seen.
AxisOptimum optimize_axis(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                          const ProjectionAxis& start, const SgdConfig& sgd,
                          const SigmoidShape& shape = {}, const BCoefficients& coeffs = {});

/// Coordinates of every row in an orthonormal basis of the complement of `axis`.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& data, const ProjectionAxis& axis);

/// Orthonormal d x (d-1) basis of the complement of a unit `axis` (Householder).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& axis);

SubspaceResult dipnsub(const Eigen::MatrixXd& data, const DipnSubConfig& config);

namespace detail {

struct CostGradient {
    double cost = 1.0;
    Eigen::VectorXd gradient;
};

/// Cost and (optionally) its gradient for pre-split cluster matrices.
CostGradient cost_and_gradient(const std::vector<Eigen::MatrixXd>& parts, const Eigen::VectorXd& axis,
                               const SigmoidShape& shape, const BCoefficients& coeffs, bool want_gradient);

std::vector<Eigen::MatrixXd> split_by_label(const Eigen::MatrixXd& data, const ClusterLabels& labels);

}  // namespace detail

}  // namespace dipkit
