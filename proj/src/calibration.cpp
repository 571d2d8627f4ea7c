#include "dipkit/calibration.hpp"

#include "dipkit/bootstrap.hpp"
#include "dipkit/detail/lm.hpp"
#include "dipkit/errors.hpp"

#include <Eigen/Cholesky>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace dipkit {

namespace detail {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x, const Eigen::VectorXd& fx) {
    Eigen::MatrixXd j(fx.size(), x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        const double step = 1e-6 * std::max(1.0, std::fabs(x(c)));
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp(c) += step;
        xm(c) -= step;
        j.col(c) = (f(xp) - f(xm)) / (2.0 * step);
    }
    return j;
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& residuals, const JacobianFn& jacobian, Eigen::VectorXd x0,
                             const LmOptions& options) {
    LmResult out;
    out.x = std::move(x0);
    Eigen::VectorXd r = residuals(out.x);
    out.sse = r.squaredNorm();
    if (!std::isfinite(out.sse)) return out;
    double lambda = options.initial_lambda;
    for (int it = 0; it < options.max_iters; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd j = jacobian ? jacobian(out.x) : numeric_jacobian(residuals, out.x, r);
        const Eigen::MatrixXd a = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-300) {
            out.converged = true;
            break;
        }
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd damped = a;
            for (Eigen::Index i = 0; i < a.rows(); ++i) damped(i, i) += lambda * std::max(a(i, i), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd candidate = out.x + step;
            const Eigen::VectorXd rc = residuals(candidate);
            const double sse = rc.squaredNorm();
            if (std::isfinite(sse) && sse < out.sse) {
                const double gain = out.sse - sse;
                out.x = candidate;
                r = rc;
                const double before = out.sse;
                out.sse = sse;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (gain <= options.rel_tol * before || step.norm() <= 1e-14 * (1.0 + out.x.norm())) {
                    out.converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            // No downhill step at any damping: a (local) minimum to working precision.
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }
    return out;
}

}  // namespace detail

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Unconstrained coordinates for Theta: logit w, log h, log k, log q, log r, s, u.
Eigen::VectorXd pack(const Theta& t) {
    Eigen::VectorXd x(7);
    x << std::log(t.w / (1.0 - t.w)), std::log(t.h), std::log(t.k), std::log(t.q), std::log(t.r), t.s, t.u;
    return x;
}

Theta unpack(const Eigen::VectorXd& x) {
    return Theta{logistic(x(0)), std::exp(x(1)), std::exp(x(2)), std::exp(x(3)), std::exp(x(4)), x(5), x(6)};
}

double power_term(double c, double z) {
    if (z < -700.0) return 1.0;
    return std::exp(std::log1p(c * std::exp(z)) / c);
}

// z with sigmoid_pvalue(z, 1, shape) = 0.5, by bisection (the map is decreasing).
double half_point(const SigmoidShape& shape) {
    double lo = 0.0;
    double hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sigmoid_pvalue(mid, 1.0, shape) > 0.5) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double theta_pvalue(double dip, const Theta& t) {
    const double bracket = t.w * power_term(t.h, -t.q * dip + t.s) + (1.0 - t.w) * power_term(t.k, -t.r * dip + t.u);
    if (!std::isfinite(bracket)) return 1.0;
    return std::clamp(1.0 - 1.0 / bracket, 0.0, 1.0);
}

std::vector<double> default_quantile_levels() {
    std::vector<double> levels;
    constexpr int tail = 55;
    for (int i = 0; i < tail; ++i) levels.push_back(1e-5 * std::pow(1e3, static_cast<double>(i) / tail));
    for (int i = 0; i <= 196; ++i) levels.push_back(0.01 + 0.005 * i);
    for (int i = tail - 1; i >= 0; --i) levels.push_back(1.0 - 1e-5 * std::pow(1e3, static_cast<double>(i) / tail));
    return levels;
}

std::string default_grid_policy() {
    return "307 levels: 55 geometric on [1e-5,0.01), 197 uniform on [0.01,0.99], 55 mirrored upper tail";
}

double empirical_quantile(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) throw InvalidInput("quantile of an empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw InvalidInput("quantile level must lie in [0,1]");
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<std::size_t> default_table_sizes() {
    std::vector<std::size_t> sizes;
    const double ratio = std::pow(150000.0 / 4.0, 1.0 / 62.0);
    for (int i = 0; i <= 62; ++i) sizes.push_back(static_cast<std::size_t>(std::llround(4.0 * std::pow(ratio, i))));
    sizes.back() = 150000;
    return sizes;
}

LookupTable::Row bootstrap_row(std::size_t n, const std::vector<double>& levels, std::size_t repetitions,
                               std::uint64_t seed) {
    const auto dips = bootstrap_dips(n, repetitions, stream_seed(seed, n));
    LookupTable::Row row;
    row.n = n;
    for (double level : levels) {
        row.dip.push_back(empirical_quantile(dips, level));
        row.p.push_back(1.0 - level);
    }
    return LookupTable::normalize_row(std::move(row));
}

LookupTable bootstrap_table(const std::vector<std::size_t>& sizes, const std::vector<double>& levels,
                            std::size_t repetitions, std::uint64_t seed) {
    if (sizes.empty()) throw InvalidInput("no table sizes given");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw InvalidInput("table sizes must be strictly ascending");
    }
    if (levels.empty()) throw InvalidInput("no quantile levels given");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] < 1.0) || (i > 0 && levels[i] <= levels[i - 1])) {
            throw InvalidInput("quantile levels must be strictly ascending inside (0,1)");
        }
    }
    std::vector<LookupTable::Row> rows;
    for (std::size_t n : sizes) rows.push_back(bootstrap_row(n, levels, repetitions, seed));
    return LookupTable(std::move(rows), repetitions, seed);
}

Theta fit_theta_per_n(const LookupTable::Row& row) {
    if (row.dip.size() < 7) throw FitFailure("row n=" + std::to_string(row.n) + " has fewer than 7 pairs");
    const auto [pmin, pmax] = std::minmax_element(row.p.begin(), row.p.end());
    if (*pmax - *pmin < 1e-9) throw FitFailure("row n=" + std::to_string(row.n) + " has constant p");

    const Eigen::Map<const Eigen::VectorXd> dip(row.dip.data(), static_cast<Eigen::Index>(row.dip.size()));
    const Eigen::Map<const Eigen::VectorXd> p(row.p.data(), static_cast<Eigen::Index>(row.p.size()));
    const detail::ResidualFn residuals = [&](const Eigen::VectorXd& x) {
        const Theta t = unpack(x);
        Eigen::VectorXd r(dip.size());
        for (Eigen::Index i = 0; i < dip.size(); ++i) r(i) = theta_pvalue(dip(i), t) - p(i);
        return r;
    };

    // Slope guess: put the default shape's midpoint on the row's median dip.
    double dip_half = row.dip.front();
    for (std::size_t i = 1; i < row.p.size(); ++i) {
        if (row.p[i] <= 0.5) {
            const double t = (row.p[i - 1] - 0.5) / std::max(row.p[i - 1] - row.p[i], 1e-300);
            dip_half = row.dip[i - 1] + t * (row.dip[i] - row.dip[i - 1]);
            break;
        }
    }
    const double b_guess = half_point(SigmoidShape{}) / dip_half;

    std::vector<Theta> starts;
    for (double w : {0.6, 0.3, 0.85}) {
        for (double hk : {1.0, 0.4, 2.5}) {
            for (double su : {6.5, 4.0, 9.0}) {
                Theta t{w, 1.6 * hk, 0.2 * hk, b_guess, b_guess, su, su};
                // Keep the median where the data puts it.
                const double scale = half_point(SigmoidShape{t.w, t.h, t.k, t.s, t.u}) / dip_half;
                t.q = t.r = scale;
                starts.push_back(t);
            }
        }
    }

    double best_sse = std::numeric_limits<double>::infinity();
    Theta best;
    for (const auto& s : starts) {
        const auto res = detail::levenberg_marquardt(residuals, nullptr, pack(s));
        if (std::isfinite(res.sse) && res.sse < best_sse) {
            best_sse = res.sse;
            best = unpack(res.x);
        }
    }
    if (!std::isfinite(best_sse)) throw FitFailure("no start converged for row n=" + std::to_string(row.n));
    return best;
}

SigmoidShape freeze_shape(const std::map<std::size_t, Theta>& theta_per_n) {
    if (theta_per_n.size() < 2) throw InvalidInput("freezing the shape needs at least two fitted rows");
    SigmoidShape s{0.0, 0.0, 0.0, 0.0, 0.0};
    for (const auto& [n, t] : theta_per_n) {
        s.w += t.w;
        s.h += t.h;
        s.k += t.k;
        s.s += t.s;
        s.u += t.u;
    }
    const double m = static_cast<double>(theta_per_n.size());
    s.w /= m;
    s.h /= m;
    s.k /= m;
    s.s /= m;
    s.u /= m;
    return s;
}

BCoefficients fit_b(const LookupTable& table, const SigmoidShape& shape) {
    if (table.empty()) throw InvalidInput("cannot fit b on an empty table");
    shape.validate();
    std::vector<double> dips, ps, roots;
    for (const auto& row : table.rows()) {
        for (std::size_t i = 0; i < row.dip.size(); ++i) {
            dips.push_back(row.dip[i]);
            ps.push_back(row.p[i]);
            roots.push_back(std::sqrt(static_cast<double>(row.n)));
        }
    }
    const auto m = static_cast<Eigen::Index>(dips.size());
    const detail::ResidualFn residuals = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto j = static_cast<std::size_t>(i);
            r(i) = sigmoid_pvalue(dips[j], x(0) * roots[j] + x(1), shape) - ps[j];
        }
        return r;
    };
    // p depends on b and dip only through z = b * dip.
    const detail::JacobianFn jacobian = [&](const Eigen::VectorXd& x) {
        Eigen::MatrixXd jac(m, 2);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto j = static_cast<std::size_t>(i);
            const double b = x(0) * roots[j] + x(1);
            const double dpdb = dips[j] * sigmoid_pvalue_derivative(b * dips[j], 1.0, shape);
            jac(i, 0) = dpdb * roots[j];
            jac(i, 1) = dpdb;
        }
        return jac;
    };

    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best;
    for (const auto& start : {Eigen::Vector2d(17.0, 12.0), Eigen::Vector2d(5.0, 0.0), Eigen::Vector2d(30.0, 30.0),
                              Eigen::Vector2d(10.0, 50.0)}) {
        const auto res = detail::levenberg_marquardt(residuals, jacobian, start);
        if (std::isfinite(res.sse) && res.sse < best_sse && res.x(0) > 0.0) {
            best_sse = res.sse;
            best = res.x;
        }
    }
    if (!std::isfinite(best_sse)) throw FitFailure("fitting (b1, b2) did not converge from any start");
    return BCoefficients{best(0), best(1)};
}

double function_mse(const LookupTable& table, const SigmoidShape& shape, const BCoefficients& coeffs) {
    double sum = 0.0;
    std::size_t cells = 0;
    for (const auto& row : table.rows()) {
        const double b = b_of_n(row.n, coeffs);
        for (std::size_t i = 0; i < row.dip.size(); ++i) {
            const double e = sigmoid_pvalue(row.dip[i], b, shape) - row.p[i];
            sum += e * e;
            ++cells;
        }
    }
    if (cells == 0) throw InvalidInput("table has no cells");
    return sum / static_cast<double>(cells);
}

HoldoutResult holdout_mse(const LookupTable& table, const BCoefficients& coeffs, const SigmoidShape& shape,
                          std::size_t repetitions, std::uint64_t seed, const std::vector<double>& levels) {
    if (table.rows().size() < 2) throw InvalidInput("holdout needs a table with at least two sizes");
    HoldoutResult out;
    double sum_f = 0.0;
    double sum_t = 0.0;
    const auto& rows = table.rows();
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const std::size_t mid = (rows[i].n + rows[i + 1].n) / 2;
        if (mid == rows[i].n || mid == rows[i + 1].n) continue;
        const auto row = bootstrap_row(mid, levels, repetitions, seed);
        const double b = b_of_n(mid, coeffs);
        for (std::size_t j = 0; j < row.dip.size(); ++j) {
            const double ef = sigmoid_pvalue(row.dip[j], b, shape) - row.p[j];
            const double et = table.pvalue(row.dip[j], mid) - row.p[j];
            sum_f += ef * ef;
            sum_t += et * et;
            ++out.cells;
        }
        out.sizes.push_back(mid);
    }
    if (out.cells == 0) throw InvalidInput("table sizes leave no room for holdout rows");
    out.mse_function = sum_f / static_cast<double>(out.cells);
    out.mse_table = sum_t / static_cast<double>(out.cells);
    return out;
}

FitReport fit_table(const LookupTable& table, std::size_t holdout_repetitions, std::uint64_t seed) {
    FitReport report;
    for (const auto& row : table.rows()) {
        try {
            report.theta_per_n[row.n] = fit_theta_per_n(row);
        } catch (const FitFailure& e) {
            spdlog::warn("skipping row n={}: {}", row.n, e.what());
        }
    }
    if (report.theta_per_n.size() < 2) throw FitFailure("fewer than two rows could be fitted");
    report.frozen_shape = freeze_shape(report.theta_per_n);
    report.coeffs = fit_b(table, report.frozen_shape);
    report.mse_total = function_mse(table, report.frozen_shape, report.coeffs);
    if (holdout_repetitions > 0) {
        const auto holdout = holdout_mse(table, report.coeffs, report.frozen_shape, holdout_repetitions, seed);
        report.mse_holdout = holdout.mse_function;
        report.mse_holdout_table = holdout.mse_table;
    }
    return report;
}

}  // namespace dipkit
