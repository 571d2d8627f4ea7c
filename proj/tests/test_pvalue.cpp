#include "generators.hpp"

#include "dipkit/bootstrap.hpp"
#include "dipkit/errors.hpp"
#include "dipkit/lookup_table.hpp"
#include "dipkit/pvalue.hpp"
#include "dipkit/significance.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dipkit;

namespace {

struct Frozen {
    double dip;
    std::size_t n;
    double p;
    double dp;
};

// Reference values computed in 30-digit arithmetic.
const Frozen kFrozen[] = {
    {0.25, 2, 0.067096314340650761655, -2.2866442678517920844},
    {0.01, 500, 0.99505360158084304837, -6.9015280234382092029},
    {0.1, 500, 3.1029448470062938683e-15, -1.238274351449946252e-12},
    {0.05, 100, 0.059691568430975260798, -10.390589156877047223},
    {0.02, 1000, 0.0091247950404737171909, -5.0567802051628081999},
    {0.1, 20, 0.079746715282761445128, -6.5680597729153455167},
};

LookupTable small_table() {
    return LookupTable({{16, {0.1, 0.2}, {0.6, 0.0}}, {4, {0.1, 0.2}, {0.8, 0.2}}}, 100, 7);
}

}  // namespace

TEST(Sigmoid, SlopeOfN) {
    EXPECT_NEAR(b_of_n(1), 29.35702, 1e-12);
    EXPECT_NEAR(b_of_n(4), 46.66486, 1e-12);
    EXPECT_NEAR(b_of_n(100), 185.12758, 1e-10);
}

TEST(Sigmoid, FrozenValues) {
    for (const auto& f : kFrozen) {
        EXPECT_NEAR(pvalue_function(f.dip, f.n), f.p, 1e-14 + 1e-12 * f.p) << f.dip << " " << f.n;
        EXPECT_NEAR(sigmoid_pvalue_derivative(f.dip, b_of_n(f.n), {}), f.dp, 1e-12 * std::abs(f.dp) + 1e-14);
    }
}

TEST(Sigmoid, RejectsOutOfRange) {
    EXPECT_THROW(pvalue_function(0.0, 10), InvalidInput);
    EXPECT_THROW(pvalue_function(0.3, 10), InvalidInput);
    EXPECT_THROW(pvalue_function(0.1, 0), InvalidInput);
    SigmoidShape bad;
    bad.w = 1.5;
    EXPECT_THROW(bad.validate(), InvalidInput);
}

TEST(SigmoidProperty, DecreasingInDipAndN) {
    gen::Rng rng(21);
    std::uniform_real_distribution<double> d(0.001, 0.24);
    for (int t = 0; t < 1000; ++t) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 100000)(rng);
        const double pa = pvalue_function(a, n), pb = pvalue_function(b, n);
        ASSERT_GE(pa, pb);
        ASSERT_GE(pa, 0.0);
        ASSERT_LE(pa, 1.0);
        ASSERT_GE(pvalue_function(a, n), pvalue_function(a, n + 100));
    }
}

TEST(SigmoidProperty, DerivativeMatchesFiniteDifference) {
    gen::Rng rng(22);
    std::uniform_real_distribution<double> d(0.005, 0.2), bb(20.0, 2000.0);
    for (int t = 0; t < 300; ++t) {
        const double x = d(rng), b = bb(rng), h = 1e-6;
        const double fd = (sigmoid_pvalue(x + h, b, {}) - sigmoid_pvalue(x - h, b, {})) / (2 * h);
        const double an = sigmoid_pvalue_derivative(x, b, {});
        ASSERT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(an)));
    }
}

TEST(Table, InterpolatesInSqrtN) {
    const auto t = small_table();
    EXPECT_EQ(t.min_n(), 4u);
    EXPECT_EQ(t.max_n(), 16u);
    EXPECT_NEAR(t.pvalue(0.15, 4), 0.5, 1e-15);
    EXPECT_NEAR(t.pvalue(0.15, 16), 0.3, 1e-15);
    EXPECT_NEAR(t.pvalue(0.15, 9), 0.4, 1e-15);
    EXPECT_NEAR(t.pvalue(0.15, 2), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(t.pvalue(0.05, 9), 1.0);
    EXPECT_DOUBLE_EQ(t.pvalue(0.24, 9), 0.0);
    EXPECT_THROW(t.pvalue(0.15, 17), OutOfRange);
}

TEST(Table, CsvRoundTrip) {
    auto t = small_table();
    t.set_grid_policy("two levels");
    const auto text = t.to_csv_string();
    const auto back = LookupTable::from_csv_string(text);
    EXPECT_EQ(back.to_csv_string(), text);
    EXPECT_EQ(back.repetitions(), 100u);
    EXPECT_EQ(back.seed(), 7u);
    EXPECT_EQ(back.grid_policy(), "two levels");
}

TEST(Table, RejectsMalformedCsv) {
    EXPECT_THROW(LookupTable::from_csv_string("n,dip,p\n4,0.1\n"), InvalidInput);
    EXPECT_THROW(LookupTable::from_csv_string("n,dip,p\n4,abc,0.5\n"), InvalidInput);
}

TEST(Table, NormalizeCollapsesTies) {
    const auto r = LookupTable::normalize_row({4, {0.1, 0.1, 0.2}, {0.9, 0.8, 0.1}});
    EXPECT_EQ(r.dip, (std::vector<double>{0.1, 0.2}));
    EXPECT_EQ(r.p, (std::vector<double>{0.9, 0.1}));
}

TEST(Table, EmbeddedCoversLargeSizes) {
    const auto& t = embedded_table();
    EXPECT_GE(t.max_n(), 100000u);
    EXPECT_THROW(t.pvalue(0.01, t.max_n() + 1), OutOfRange);
}

TEST(Bootstrap, WorkerCountDoesNotMatter) {
    EXPECT_EQ(bootstrap_dips(50, 200, 5, 1), bootstrap_dips(50, 200, 5, 3));
}

TEST(Bootstrap, DipsSortedAndBounded) {
    const auto d = bootstrap_dips(30, 300, 6, 1);
    ASSERT_EQ(d.size(), 300u);
    EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
    EXPECT_GE(d.front(), 1.0 / 60.0 - 1e-15);
    EXPECT_LE(d.back(), 0.25);
}

TEST(Bootstrap, CachedNullEqualsResampling) {
    const BootstrapNull null(100, 300, 9);
    for (double dip : {0.01, 0.03, 0.05, 0.1}) {
        EXPECT_EQ(null.pvalue(dip), pvalue_bootstrap(dip, 100, 300, 9));
        EXPECT_EQ(cached_null(100, 300, 9)->pvalue(dip), null.pvalue(dip));
    }
}

TEST(Bootstrap, UniformSamplesGiveUniformP) {
    gen::Rng rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const BootstrapNull null(200, 2000, 3);
    int below = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x(200);
        for (auto& v : x) v = u(rng);
        std::sort(x.begin(), x.end());
        if (null.pvalue(compute_dip(x).dip) < 0.5) ++below;
    }
    EXPECT_NEAR(static_cast<double>(below) / trials, 0.5, 0.1);
}

TEST(Significance, MethodsAgreeRoughly) {
    LookupTable t = embedded_table();
    PValueCalculator f, tb, bs;
    tb.method = PValueMethod::table;
    tb.table = &t;
    bs.method = PValueMethod::bootstrap;
    bs.bootstrap_reps = 2000;
    for (double dip : {0.03, 0.04, 0.06}) {
        const double pf = f.pvalue(dip, 200), pt = tb.pvalue(dip, 200), pb = bs.pvalue(dip, 200);
        EXPECT_NEAR(pf, pt, 0.03);
        EXPECT_NEAR(pf, pb, 0.03);
    }
}

TEST(Significance, DegenerateGivesOne) {
    PValueCalculator c;
    EXPECT_EQ(c.pvalue(compute_dip(std::vector<double>{1.0}), 1), 1.0);
}

TEST(Significance, ParseMethod) {
    EXPECT_EQ(parse_method("table"), PValueMethod::table);
    EXPECT_EQ(to_string(PValueMethod::bootstrap), "bootstrap");
    EXPECT_THROW(parse_method("magic"), InvalidInput);
}
