#include "dipkit/dipnsub.hpp"

#include "dipkit/errors.hpp"
#include "dipkit/gradient.hpp"

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dipkit {

void SgdConfig::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw InvalidInput("step size must be positive");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidInput("momentum must lie in [0,1)");
    if (max_iters == 0) throw InvalidInput("max_iters must be at least 1");
    if (!(convergence_tol > 0.0)) throw InvalidInput("convergence tolerance must be positive");
}

void DipnSubConfig::validate() const {
    significance.validate();
    sgd.validate();
    if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidInput("threshold must lie in (0,1]");
}

namespace detail {

std::vector<Eigen::MatrixXd> split_by_label(const Eigen::MatrixXd& data, const ClusterLabels& labels) {
    if (static_cast<Eigen::Index>(labels.labels.size()) != data.rows()) {
        throw InvalidInput("labels and data differ in length");
    }
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(labels.k));
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const int l = labels.labels[i];
        if (l >= labels.k) throw InvalidInput("label outside [-1, k)");
        if (l >= 0) members[static_cast<std::size_t>(l)].push_back(static_cast<Eigen::Index>(i));
    }
    std::vector<Eigen::MatrixXd> parts;
    parts.reserve(members.size());
    for (const auto& m : members) parts.emplace_back(data(m, Eigen::all));
    return parts;
}

CostGradient cost_and_gradient(const std::vector<Eigen::MatrixXd>& parts, const Eigen::VectorXd& axis,
                               const SigmoidShape& shape, const BCoefficients& coeffs, bool want_gradient) {
    CostGradient out;
    out.gradient = Eigen::VectorXd::Zero(axis.size());
    double total = 0.0;
    double weighted = 0.0;
    const ProjectionAxis rho(axis);
    for (const auto& part : parts) {
        const auto size = static_cast<std::size_t>(part.rows());
        total += static_cast<double>(size);
        if (size <= 3) {
            weighted += static_cast<double>(size);
            continue;
        }
        const Projection proj = project_and_sort(part, rho);
        const DipResult dr = compute_dip(proj.sample);
        const double b = b_of_n(size, coeffs);
        weighted += static_cast<double>(size) * sigmoid_pvalue(dr.dip, b, shape);
        if (!want_gradient || !dr.modal_triangle) continue;
        try {
            const Eigen::VectorXd g = dip_gradient_at(part, proj, dr);
            out.gradient += static_cast<double>(size) * sigmoid_pvalue_derivative(dr.dip, b, shape) * g;
        } catch (const DegenerateProjection&) {
            spdlog::debug("cluster of {} samples has a degenerate projection; no gradient", size);
        }
    }
    if (total == 0.0) return out;
    out.cost = weighted / total;
    out.gradient /= total;
    return out;
}

}  // namespace detail

double weighted_pvalue_cost(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                            const ProjectionAxis& axis, const SigmoidShape& shape,
                            const BCoefficients& coeffs) {
    if (axis.dim() != data.cols()) throw InvalidInput("axis dimension does not match the data");
    const auto parts = detail::split_by_label(data, labels);
    return detail::cost_and_gradient(parts, axis.direction(), shape, coeffs, false).cost;
}

std::vector<ProjectionAxis> candidate_axes(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                                           const SigmoidShape& shape, const BCoefficients& coeffs) {
    const Eigen::Index d = data.cols();
    if (d < 1) throw InvalidInput("data has no features");
    const auto q = static_cast<Eigen::Index>(
        std::min<double>(static_cast<double>(d), std::max(1.0, std::round(std::log(static_cast<double>(d))))));

    const auto parts = detail::split_by_label(data, labels);
    std::vector<double> costs(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        costs[static_cast<std::size_t>(j)] =
            detail::cost_and_gradient(parts, Eigen::VectorXd::Unit(d, j), shape, coeffs, false).cost;
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return costs[static_cast<std::size_t>(a)] < costs[static_cast<std::size_t>(b)];
    });

    std::vector<ProjectionAxis> out;
    for (Eigen::Index i = 0; i < q; ++i) out.push_back(ProjectionAxis::unit(d, order[static_cast<std::size_t>(i)]));

    const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / std::max<double>(1.0, static_cast<double>(data.rows() - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    for (Eigen::Index i = 0; i < q; ++i) {
        Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - i);
        // Fix the sign so the result does not depend on the solver's choice.
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        out.emplace_back(std::move(v));
    }
    return out;
}

namespace {

AxisOptimum optimize_parts(const std::vector<Eigen::MatrixXd>& parts, const ProjectionAxis& start,
                           const SgdConfig& sgd, const SigmoidShape& shape, const BCoefficients& coeffs) {
    Eigen::VectorXd rho = start.normalized().direction();
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(rho.size());
    auto cg = detail::cost_and_gradient(parts, rho, shape, coeffs, true);
    AxisOptimum best{ProjectionAxis(rho), cg.cost, 0};
    double previous = cg.cost;
    for (std::size_t it = 1; it <= sgd.max_iters; ++it) {
        velocity = sgd.momentum * velocity - sgd.step_size * cg.gradient;
        rho += velocity;
        const double norm = rho.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) break;
        rho /= norm;
        cg = detail::cost_and_gradient(parts, rho, shape, coeffs, true);
        best.iterations = it;
        if (cg.cost < best.cost) {
            best.cost = cg.cost;
            best.axis = ProjectionAxis(rho);
        }
        if (std::fabs(previous - cg.cost) < sgd.convergence_tol) break;
        previous = cg.cost;
    }
    return best;
}

}  // namespace

AxisOptimum optimize_axis(const Eigen::MatrixXd& data, const ClusterLabels& labels,
                          const ProjectionAxis& start, const SgdConfig& sgd, const SigmoidShape& shape,
                          const BCoefficients& coeffs) {
    sgd.validate();
    if (start.dim() != data.cols()) throw InvalidInput("axis dimension does not match the data");
    return optimize_parts(detail::split_by_label(data, labels), start, sgd, shape, coeffs);
}

Eigen::MatrixXd complement_basis(const Eigen::VectorXd& axis) {
    const Eigen::Index d = axis.size();
    Eigen::VectorXd v = axis.normalized();
    v(0) += v(0) >= 0.0 ? 1.0 : -1.0;
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d) - 2.0 * v * v.transpose() / v.squaredNorm();
    return h.rightCols(d - 1);
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& data, const ProjectionAxis& axis) {
    if (axis.dim() != data.cols()) throw InvalidInput("axis dimension does not match the data");
    return data * complement_basis(axis.direction());
}

SubspaceResult dipnsub(const Eigen::MatrixXd& data, const DipnSubConfig& config) {
    config.validate();
    const Eigen::Index n = data.rows();
    if (n < 4) throw InvalidInput("dipnsub needs at least 4 samples");
    if (data.cols() < 1) throw InvalidInput("data has no features");
    if (!data.allFinite()) throw InvalidInput("data contains non-finite values");

    const SigmoidShape& shape = config.significance.calculator.shape;
    const BCoefficients& coeffs = config.significance.calculator.coeffs;

    SubspaceResult result;
    result.labels.labels.assign(static_cast<std::size_t>(n), 0);
    result.labels.k = 1;
    Eigen::MatrixXd work = data;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(data.cols(), data.cols());
    std::vector<Eigen::VectorXd> projected_cols;

    while (work.cols() > 0) {
        const auto parts = detail::split_by_label(work, result.labels);
        const auto candidates = candidate_axes(work, result.labels, shape, coeffs);
        AxisOptimum best{candidates.front(), 2.0, 0};
        for (const auto& start : candidates) {
            AxisOptimum opt = optimize_parts(parts, start, config.sgd, shape, coeffs);
            if (opt.cost < best.cost) best = std::move(opt);
        }
        const Eigen::VectorXd rho = best.axis.normalized().direction();

        // Which clusters are multimodal along rho, and how many samples they hold.
        std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(result.labels.k));
        for (std::size_t i = 0; i < result.labels.labels.size(); ++i) {
            if (result.labels.labels[i] >= 0) members[static_cast<std::size_t>(result.labels.labels[i])].push_back(i);
        }
        const Eigen::VectorXd proj_all = work * rho;
        std::vector<bool> multimodal(members.size(), false);
        std::size_t multimodal_mass = 0;
        for (std::size_t c = 0; c < members.size(); ++c) {
            if (members[c].size() <= 3) continue;
            std::vector<double> vals;
            vals.reserve(members[c].size());
            for (auto i : members[c]) vals.push_back(proj_all(static_cast<Eigen::Index>(i)));
            const SortedSample s = SortedSample::from_unsorted(std::move(vals));
            const double p = config.significance.calculator.pvalue(compute_dip(s), s.size());
            if (p < config.significance.alpha) {
                multimodal[c] = true;
                multimodal_mass += members[c].size();
            }
        }
        if (static_cast<double>(multimodal_mass) / static_cast<double>(n) < config.threshold) break;

        std::vector<int> next(result.labels.labels.size(), kNoise);
        int next_id = 0;
        for (std::size_t c = 0; c < members.size(); ++c) {
            if (!multimodal[c]) {
                for (auto i : members[c]) next[i] = next_id;
                ++next_id;
                continue;
            }
            // Stable order so tied projections map back deterministically.
            std::vector<std::size_t> order(members[c].size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return proj_all(static_cast<Eigen::Index>(members[c][a])) <
                       proj_all(static_cast<Eigen::Index>(members[c][b]));
            });
            std::vector<double> vals(order.size());
            for (std::size_t j = 0; j < order.size(); ++j) vals[j] = proj_all(static_cast<Eigen::Index>(members[c][order[j]]));
            const SortedSample s = SortedSample::from_sorted(std::move(vals));
            ClusterLabels sub = tailored_dip(s, config.significance);
            if (!config.keep_outliers && sub.k > 0) sub = assign_noise(s, sub);
            for (std::size_t j = 0; j < order.size(); ++j) {
                const int l = sub.labels[j];
                next[members[c][order[j]]] = l < 0 ? kNoise : next_id + l;
            }
            next_id += sub.k;
        }
        result.labels.labels = std::move(next);
        result.labels.k = next_id;

        result.axes.push_back((basis * rho).normalized());
        result.costs.push_back(best.cost);
        projected_cols.push_back(proj_all);
        const Eigen::MatrixXd comp = complement_basis(rho);
        work = work * comp;
        basis = basis * comp;
    }

    result.projected.resize(n, static_cast<Eigen::Index>(projected_cols.size()));
    for (std::size_t j = 0; j < projected_cols.size(); ++j) {
        result.projected.col(static_cast<Eigen::Index>(j)) = projected_cols[j];
    }
    return result;
}

}  // namespace dipkit
