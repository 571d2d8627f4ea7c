#pragma once

#include "dipkit/lookup_table.hpp"
#include "dipkit/pvalue.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dipkit {

/// Seven free parameters of a per-size fit. q and r are the slopes of the two
/// terms; the final model ties both to b(n).
struct Theta {
    double w = 0.6;
    double h = 1.6;
    double k = 0.2;
    double q = 100.0;
    double r = 100.0;
    double s = 6.5;
    double u = 6.5;
};

/// p-value of the seven-parameter model.
double theta_pvalue(double dip, const Theta& theta);

struct FitReport {
    std::map<std::size_t, Theta> theta_per_n;
    SigmoidShape frozen_shape;
    BCoefficients coeffs;
    double mse_total = 0.0;
    double mse_holdout = 0.0;
    double mse_holdout_table = 0.0;
};

/// 307 levels: 197 evenly spaced on [0.01, 0.99] and 55 geometric levels in
/// each tail down to 1e-5 from either end.
std::vector<double> default_quantile_levels();
std::string default_grid_policy();

/// Type-7 (linear) quantile of sorted values.
double empirical_quantile(const std::vector<double>& sorted, double level);

/// 63 sizes from 4 to 150000, close to geometric.
std::vector<std::size_t> default_table_sizes();

/// One row per size: dip = bootstrap quantile at each level, p = 1 - level.
/// Row n uses the seed stream_seed(seed, n), so rows can be built independently.
LookupTable bootstrap_table(const std::vector<std::size_t>& sizes, const std::vector<double>& levels,
                            std::size_t repetitions, std::uint64_t seed);
LookupTable::Row bootstrap_row(std::size_t n, const std::vector<double>& levels, std::size_t repetitions,
                               std::uint64_t seed);

/// Least-squares fit of all seven parameters to one row, best of several starts.
/// Throws FitFailure for rows without sigmoid structure or when no start converges.
Theta fit_theta_per_n(const LookupTable::Row& row);

/// Across-size mean of w, h, k, s, u. Needs at least two rows.
SigmoidShape freeze_shape(const std::map<std::size_t, Theta>& theta_per_n);

/// Minimizes the mean squared error over all table cells in (b1, b2).
BCoefficients fit_b(const LookupTable& table, const SigmoidShape& shape);

/// Mean squared error of the closed form over all cells of `table`.
double function_mse(const LookupTable& table, const SigmoidShape& shape, const BCoefficients& coeffs);

struct HoldoutResult {
    double mse_function = 0.0;
    double mse_table = 0.0;
    std::size_t cells = 0;
    std::vector<std::size_t> sizes;
};

/// Bootstraps fresh rows at the midpoints between adjacent table sizes and
/// scores the closed form and the table's sqrt(n) interpolation against them.
HoldoutResult holdout_mse(const LookupTable& table, const BCoefficients& coeffs, const SigmoidShape& shape,
                          std::size_t repetitions, std::uint64_t seed,
                          const std::vector<double>& levels = default_quantile_levels());

/// Full pipeline: per-size fits, frozen shape, (b1, b2), in-sample and holdout MSE.
/// holdout_repetitions = 0 skips the holdout and leaves both holdout MSEs at 0.
FitReport fit_table(const LookupTable& table, std::size_t holdout_repetitions, std::uint64_t seed);

}  // namespace dipkit
