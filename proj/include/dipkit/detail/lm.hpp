#pragma once

#include <Eigen/Core>

#include <functional>

namespace dipkit::detail {

struct LmOptions {
    int max_iters = 500;
    double initial_lambda = 1e-3;
    double rel_tol = 1e-15;
};

struct LmResult {
    Eigen::VectorXd x;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Levenberg-Marquardt with Marquardt's diagonal scaling. A null jacobian
/// falls back to central differences.
LmResult levenberg_marquardt(const ResidualFn& residuals, const JacobianFn& jacobian, Eigen::VectorXd x0,
                             const LmOptions& options = {});

}  // namespace dipkit::detail
