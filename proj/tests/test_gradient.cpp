#include "generators.hpp"

#include "dipkit/errors.hpp"
#include "dipkit/gradient.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dipkit;

namespace {

DipResult dip_along(const Eigen::MatrixXd& m, const Eigen::VectorXd& a) {
    return compute_dip(project_and_sort(m, ProjectionAxis(a)).sample);
}

// Same triangle positions occupied by the same data rows.
bool same_triangle(const Eigen::MatrixXd& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const auto pa = project_and_sort(m, ProjectionAxis(a)), pb = project_and_sort(m, ProjectionAxis(b));
    const auto x = compute_dip(pa.sample), y = compute_dip(pb.sample);
    if (!x.modal_triangle || !y.modal_triangle || !(*x.modal_triangle == *y.modal_triangle)) return false;
    for (std::size_t i : {x.modal_triangle->i1, x.modal_triangle->i2, x.modal_triangle->i3}) {
        if (pa.order[i] != pb.order[i]) return false;
    }
    return true;
}

}  // namespace

TEST(GradientProperty, MatchesCentralDifferences) {
    gen::Rng rng(31);
    int checked = 0;
    for (int t = 0; t < 400 && checked < 120; ++t) {
        const Eigen::Index d = 2 + t % 5;
        const auto m = gen::blobs(rng, 60 + static_cast<std::size_t>(t % 40), d, 3.0);
        const Eigen::VectorXd a = gen::random_axis(rng, d);
        GradientResult g;
        try {
            g = dip_gradient(m, ProjectionAxis(a));
        } catch (const NoGradient&) {
            continue;
        }
        const double h = 1e-7;
        bool switched = false;
        Eigen::VectorXd fd(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            Eigen::VectorXd ap = a, am = a;
            ap(j) += h;
            am(j) -= h;
            const auto rp = dip_along(m, ap), rm = dip_along(m, am);
            if (!same_triangle(m, a, ap) || !same_triangle(m, a, am)) switched = true;
            fd(j) = (rp.dip - rm.dip) / (2 * h);
        }
        if (switched) continue;
        ++checked;
        ASSERT_LT((fd - g.dip_gradient).norm(), 1e-4 * std::max(g.dip_gradient.norm(), 1e-3)) << "t=" << t;
    }
    EXPECT_GE(checked, 100);
}

TEST(GradientProperty, OrthogonalToAxis) {
    gen::Rng rng(32);
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index d = 2 + t % 6;
        const auto m = gen::blobs(rng, 80, d, 2.0);
        const Eigen::VectorXd a = gen::random_axis(rng, d) * (0.5 + t % 3);
        try {
            const auto g = dip_gradient(m, ProjectionAxis(a));
            ASSERT_LT(std::abs(g.dip_gradient.dot(a)), 1e-10 * g.dip_gradient.norm() * a.norm() + 1e-300);
        } catch (const NoGradient&) {
        }
    }
}

TEST(GradientProperty, PValueGradientAntiparallel) {
    gen::Rng rng(33);
    int checked = 0;
    for (int t = 0; t < 100; ++t) {
        const auto m = gen::blobs(rng, 100, 3, 2.5);
        try {
            const auto g = pvalue_gradient(m, ProjectionAxis(gen::random_axis(rng, 3)));
            const double nd = g.dip_gradient.norm(), np = g.pvalue_gradient.norm();
            if (nd == 0.0 || np == 0.0) continue;
            ASSERT_NEAR(g.dip_gradient.dot(g.pvalue_gradient) / (nd * np), -1.0, 1e-12);
            ++checked;
        } catch (const NoGradient&) {
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(Gradient, ReportsDipAndPValue) {
    gen::Rng rng(34);
    const auto m = gen::blobs(rng, 200, 2, 6.0);
    const Eigen::VectorXd a = Eigen::Vector2d(1.0, 0.0);
    const auto g = pvalue_gradient(m, ProjectionAxis(a));
    EXPECT_NEAR(g.dip, dip_along(m, a).dip, 1e-15);
    EXPECT_NEAR(g.pvalue, pvalue_function(g.dip, 200), 1e-15);
}

TEST(Gradient, NoTriangleThrows) {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0, 1, 1;
    EXPECT_THROW(dip_gradient(m, ProjectionAxis::unit(2, 0)), NoGradient);
}
