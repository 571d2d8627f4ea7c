#include "generators.hpp"

#include "dipkit/bench.hpp"
#include "dipkit/distributions.hpp"
#include "dipkit/errors.hpp"
#include "dipkit/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace dipkit;

TEST(Distributions, ParseAndName) {
    const auto s = parse_distribution("N(4,1)+L(0,2)");
    EXPECT_EQ(s.first.family, Family::normal);
    ASSERT_TRUE(s.second.has_value());
    EXPECT_EQ(s.second->family, Family::laplace);
    EXPECT_EQ(parse_distribution(s.name()).name(), s.name());
    EXPECT_EQ(parse_distribution("Tnc(4,2,0,1)").first.nc, 2.0);
    EXPECT_THROW(parse_distribution("N(4)"), InvalidInput);
    EXPECT_THROW(parse_distribution("Q(1,2)"), InvalidInput);
    EXPECT_THROW(parse_distribution("N(0,-1)"), InvalidInput);
}

TEST(Distributions, UnionSplitsAndIsDeterministic) {
    const auto spec = parse_distribution("N(0,1)+N(10,1)");
    const auto a = generate(spec, 101, 5);
    const auto b = generate(spec, 101, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(std::count(a.labels.begin(), a.labels.end(), 1), 50);
    EXPECT_NE(generate(spec, 101, 6).values, a.values);
}

TEST(Distributions, MomentsRoughlyRight) {
    const auto u = generate(parse_distribution("U(2,4)"), 20000, 1).values;
    EXPECT_GE(*std::min_element(u.begin(), u.end()), 2.0);
    EXPECT_LE(*std::max_element(u.begin(), u.end()), 6.0);
    const auto n = generate(parse_distribution("N(4,2)"), 20000, 2).values;
    double mean = 0.0;
    for (double v : n) mean += v / 20000.0;
    EXPECT_NEAR(mean, 4.0, 0.05);
    EXPECT_EQ(standard_scenarios().size(), 23u);
}

TEST(Nmi, IdenticalAndPermuted) {
    const std::vector<int> a{0, 0, 1, 1, 2, 2, -1};
    const std::vector<int> b{5, 5, 3, 3, 0, 0, 9};
    EXPECT_DOUBLE_EQ(nmi(a, a), 1.0);
    EXPECT_NEAR(nmi(a, b), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(nmi({1, 1, 1}, {2, 2, 2}), 1.0);
    EXPECT_DOUBLE_EQ(nmi({1, 1, 1}, {0, 1, 2}), 0.0);
    EXPECT_THROW(nmi({1, 2}, {1}), InvalidInput);
}

TEST(NmiProperty, SymmetricAndBounded) {
    gen::Rng rng(61);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 5 + static_cast<std::size_t>(t);
        std::uniform_int_distribution<int> l(-1, 1 + t % 5);
        std::vector<int> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = l(rng);
            b[i] = l(rng);
        }
        const double x = nmi(a, b);
        ASSERT_EQ(x, nmi(b, a));
        ASSERT_GE(x, 0.0);
        ASSERT_LE(x, 1.0 + 1e-15);
    }
}

TEST(Bench, TableUnavailableBeyondMaxN) {
    LookupTable t({{4, {0.1, 0.2}, {0.8, 0.2}}, {100, {0.05, 0.1}, {0.5, 0.0}}});
    BenchConfig c;
    c.scenarios = {parse_distribution("N(0,1)")};
    c.sizes = {50, 200};
    c.repetitions_per_cell = 3;
    c.bootstrap_reps = 50;
    c.table = &t;
    const auto r = bench_pvalue_methods(c);
    EXPECT_FALSE(r.any_unavailable("table", 50));
    EXPECT_TRUE(r.any_unavailable("table", 200));
    EXPECT_FALSE(r.any_unavailable("function", 200));
    std::ostringstream out;
    r.write_csv(out);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "method,n,scenario,seconds");
    EXPECT_NE(out.str().find("table,200,N(0,1),NA"), std::string::npos);
}
