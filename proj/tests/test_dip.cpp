#include "dip_oracle.hpp"
#include "generators.hpp"

#include "dipkit/dip.hpp"
#include "dipkit/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dipkit;

TEST(Dip, TwoPointsIsQuarter) {
    const auto r = compute_dip(std::vector<double>{1.0, 2.0});
    EXPECT_DOUBLE_EQ(r.dip, 0.25);
    EXPECT_FALSE(r.modal_triangle.has_value());
}

TEST(Dip, FourEquispacedPoints) {
    const auto r = compute_dip(std::vector<double>{0, 1, 2, 3});
    EXPECT_DOUBLE_EQ(r.dip, 0.125);
    EXPECT_FALSE(r.modal_triangle.has_value());
}

TEST(Dip, TwoTightClusters) {
    const auto r = compute_dip(std::vector<double>{0, 0.01, 0.02, 10, 10.01, 10.02});
    EXPECT_NEAR(r.dip, 0.2495, 1e-12);
    EXPECT_EQ(r.modal_interval.lo, 3u);
    EXPECT_EQ(r.modal_interval.hi, 5u);
}

TEST(Dip, EightEquispacedPoints) {
    std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7};
    EXPECT_NEAR(compute_dip(x).dip, 0.0625, 1e-15);
}

TEST(Dip, SinglePointIsDegenerate) {
    const auto r = compute_dip(std::vector<double>{3.0});
    EXPECT_EQ(r.dip, 0.0);
    EXPECT_TRUE(r.degenerate);
}

TEST(Dip, AllEqualGivesHalfOverN) {
    const auto r = compute_dip(std::vector<double>(10, 2.5));
    EXPECT_DOUBLE_EQ(r.dip, 0.05);
}

TEST(Dip, RejectsBadInput) {
    EXPECT_THROW(compute_dip(std::vector<double>{}), InvalidInput);
    EXPECT_THROW(compute_dip(std::vector<double>{2.0, 1.0}), InvalidInput);
    EXPECT_THROW(compute_dip(std::vector<double>{0.0, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
    EXPECT_THROW(SortedSample::from_unsorted({1.0, std::numeric_limits<double>::infinity()}), InvalidInput);
}

TEST(DipProperty, MatchesOracleOnSmallSamples) {
    gen::Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
        const auto x = gen::sorted_sample(rng, n);
        ASSERT_NEAR(compute_dip(x).dip, oracle::dip(x), 1e-12) << "n=" << n << " t=" << t;
    }
}

TEST(DipProperty, Bounds) {
    gen::Rng rng(12);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 2000)(rng);
        const double d = compute_dip(gen::sorted_sample(rng, n)).dip;
        ASSERT_GE(d, 1.0 / (2.0 * static_cast<double>(n)) - 1e-15);
        ASSERT_LE(d, 0.25 + 1e-15);
    }
}

TEST(DipProperty, AffineInvariance) {
    gen::Rng rng(13);
    std::uniform_real_distribution<double> a(0.1, 10.0), b(-100.0, 100.0);
    for (int t = 0; t < 300; ++t) {
        const auto x = gen::sorted_sample(rng, 50 + static_cast<std::size_t>(t));
        const double scale = a(rng), shift = b(rng);
        std::vector<double> y(x.size()), m(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = scale * x[i] + shift;
            m[x.size() - 1 - i] = -x[i];
        }
        const double d = compute_dip(x).dip;
        ASSERT_NEAR(compute_dip(y).dip, d, 1e-12);
        ASSERT_NEAR(compute_dip(m).dip, d, 1e-12);
    }
}

TEST(DipProperty, TriangleIsOrderedAndInsideSample) {
    gen::Rng rng(14);
    for (int t = 0; t < 300; ++t) {
        const auto x = gen::sorted_sample(rng, 20 + static_cast<std::size_t>(t));
        const auto r = compute_dip(x);
        ASSERT_LE(r.modal_interval.lo, r.modal_interval.hi);
        ASSERT_LT(r.modal_interval.hi, x.size());
        if (r.modal_triangle) {
            ASSERT_LT(r.modal_triangle->i1, r.modal_triangle->i2);
            ASSERT_LT(r.modal_triangle->i2, r.modal_triangle->i3);
            ASSERT_LT(r.modal_triangle->i3, x.size());
        }
    }
}

TEST(Projection, SortsAndTracksOrder) {
    Eigen::MatrixXd m(3, 2);
    m << 3, 0, 1, 0, 2, 0;
    const auto p = project_and_sort(m, ProjectionAxis::unit(2, 0));
    EXPECT_EQ(p.order, (std::vector<std::size_t>{1, 2, 0}));
    EXPECT_DOUBLE_EQ(p.sample[0], 1.0);
    EXPECT_THROW(ProjectionAxis(Eigen::VectorXd::Zero(2)), InvalidInput);
}
