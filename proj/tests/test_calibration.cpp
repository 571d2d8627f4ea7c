#include "generators.hpp"

#include "dipkit/calibration.hpp"
#include "dipkit/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dipkit;

namespace {

// Dip at which the closed form equals p, by bisection on the decreasing curve.
double dip_at(double p, std::size_t n, const SigmoidShape& shape, const BCoefficients& c) {
    double lo = 1e-9, hi = 0.25;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pvalue_function(mid, n, shape, c) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

LookupTable noiseless_table(const SigmoidShape& shape, const BCoefficients& c) {
    std::vector<LookupTable::Row> rows;
    for (std::size_t n : {50u, 200u, 1000u, 5000u, 20000u}) {
        LookupTable::Row r{n, {}, {}};
        for (int i = 1; i < 50; ++i) {
            const double p = 1.0 - i / 50.0;
            r.dip.push_back(dip_at(p, n, shape, c));
            r.p.push_back(pvalue_function(r.dip.back(), n, shape, c));
        }
        rows.push_back(std::move(r));
    }
    return LookupTable(std::move(rows));
}

}  // namespace

TEST(Grid, LevelsAndSizes) {
    const auto levels = default_quantile_levels();
    EXPECT_EQ(levels.size(), 307u);
    EXPECT_TRUE(std::is_sorted(levels.begin(), levels.end()));
    EXPECT_NEAR(levels.front(), 1e-5, 1e-15);
    EXPECT_NEAR(levels.back(), 1.0 - 1e-5, 1e-12);
    const auto sizes = default_table_sizes();
    EXPECT_EQ(sizes.size(), 63u);
    EXPECT_EQ(sizes.front(), 4u);
    EXPECT_EQ(sizes.back(), 150000u);
}

TEST(Grid, EmpiricalQuantileIsLinear) {
    const std::vector<double> v{1, 2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 1.0), 5.0);
    EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.3), 2.2);
}

TEST(Fit, RecoversSlopeOnNoiselessTable) {
    const SigmoidShape shape;
    const BCoefficients truth{20.0, 5.0};
    const auto b = fit_b(noiseless_table(shape, truth), shape);
    EXPECT_NEAR(b.b1, 20.0, 1e-6);
    EXPECT_NEAR(b.b2, 5.0, 1e-6);
    EXPECT_LT(function_mse(noiseless_table(shape, truth), shape, b), 1e-14);
}

TEST(Fit, ThetaReproducesNoiselessRow) {
    const auto table = noiseless_table({}, {});
    const auto& row = table.rows()[2];
    const Theta t = fit_theta_per_n(row);
    double sse = 0.0;
    for (std::size_t i = 0; i < row.dip.size(); ++i) sse += std::pow(theta_pvalue(row.dip[i], t) - row.p[i], 2);
    EXPECT_LT(sse / static_cast<double>(row.dip.size()), 1e-8);
}

TEST(Fit, ThetaEqualsSigmoidWhenSlopesTied) {
    const SigmoidShape s;
    const double b = b_of_n(300);
    const Theta t{s.w, s.h, s.k, b, b, s.s, s.u};
    for (double d : {0.01, 0.03, 0.05, 0.1}) EXPECT_DOUBLE_EQ(theta_pvalue(d, t), sigmoid_pvalue(d, b, s));
}

TEST(Fit, FreezeShapeAverages) {
    std::map<std::size_t, Theta> m;
    m[10] = Theta{0.5, 1.0, 0.1, 1, 1, 6.0, 7.0};
    m[20] = Theta{0.7, 2.0, 0.3, 1, 1, 8.0, 9.0};
    const auto s = freeze_shape(m);
    EXPECT_DOUBLE_EQ(s.w, 0.6);
    EXPECT_DOUBLE_EQ(s.h, 1.5);
    EXPECT_DOUBLE_EQ(s.k, 0.2);
    EXPECT_DOUBLE_EQ(s.s, 7.0);
    EXPECT_DOUBLE_EQ(s.u, 8.0);
    m.erase(20);
    EXPECT_THROW(freeze_shape(m), InvalidInput);
}

TEST(Fit, FlatRowFails) {
    LookupTable::Row r{100, {0.01, 0.02, 0.03, 0.04, 0.05}, {0.5, 0.5, 0.5, 0.5, 0.5}};
    EXPECT_THROW(fit_theta_per_n(r), FitFailure);
}

TEST(BootstrapTable, RowsAreDeterministicPerSize) {
    const std::vector<double> levels{0.1, 0.5, 0.9};
    const auto a = bootstrap_table({20, 40}, levels, 200, 3);
    const auto b = bootstrap_table({40}, levels, 200, 3);
    EXPECT_EQ(a.rows()[1].dip, b.rows()[0].dip);
    const std::vector<double> p{0.9, 0.5, 0.1};
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(a.rows()[1].p[i], p[i], 1e-15);
}
