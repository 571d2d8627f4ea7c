#pragma once

// Reference dip straight from the definition: the smallest d for which some
// unimodal distribution function stays within d of the ECDF. Feasibility of a
// given d is decided exactly for each candidate mode position; d is found by
// bisection. Cubic per feasibility test, so only meant for small samples with
// distinct values.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace dipkit::oracle {

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest value c of the distribution function at the mode x[j] that still
// admits a concave non-decreasing continuation to the right. Returns -inf if
// none exists.
inline double right_cmax(const std::vector<double>& x, std::size_t j, double d) {
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    auto lo = [&](std::size_t k) { return static_cast<double>(k + 1) / nn - d; };
    auto hi = [&](std::size_t k) { return static_cast<double>(k) / nn + d; };

    // P[k]: running max of lower bounds over (j, k]; -inf at j itself.
    std::vector<double> P(n, kNegInf);
    for (std::size_t k = j + 1; k < n; ++k) P[k] = std::max(k == j + 1 ? kNegInf : P[k - 1], lo(k));

    double cmax = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
        cmax = std::min(cmax, hi(k));
        if (P[k] > hi(k)) return kNegInf;
        if (P[k] > 1.0) return kNegInf;
    }
    for (std::size_t a = j; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            for (std::size_t k = a + 1; k < b; ++k) {
                const double lam = (x[b] - x[k]) / (x[b] - x[a]);
                const double h = hi(k);
                const double pa = P[a];
                const double pb = P[b];
                if (pa != kNegInf && lam * pa + (1.0 - lam) * pb > h) return kNegInf;
                cmax = std::min(cmax, (h - (1.0 - lam) * pb) / lam);
                if (pa != kNegInf) cmax = std::min(cmax, (h - lam * pa) / (1.0 - lam));
            }
        }
    }
    return cmax;
}

// Whether a convex non-decreasing function through x[0..j-1] can stay within
// the bounds while its left limit at x[j] is at most H.
inline bool left_ok(const std::vector<double>& x, std::size_t j, double d, double H) {
    const double nn = static_cast<double>(x.size());
    std::vector<double> S(j + 1);
    S[j] = H;
    for (std::size_t k = j; k-- > 0;) S[k] = std::min(static_cast<double>(k) / nn + d, S[k + 1]);
    for (std::size_t k = 0; k < j; ++k) {
        double g = S[k];
        for (std::size_t a = 0; a <= k; ++a) {
            for (std::size_t b = k + 1; b <= j; ++b) {
                if (a == k) continue;
                const double lam = (x[b] - x[k]) / (x[b] - x[a]);
                g = std::min(g, lam * S[a] + (1.0 - lam) * S[b]);
            }
        }
        const double lo = static_cast<double>(k + 1) / nn - d;
        if (g < lo) return false;
    }
    return true;
}

inline bool feasible(const std::vector<double>& x, double d) {
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double cmin = std::max(0.0, static_cast<double>(j + 1) / nn - d);
        const double cmax = right_cmax(x, j, d);
        if (cmax < cmin) continue;
        const double H = std::min(static_cast<double>(j) / nn + d, cmax);
        if (left_ok(x, j, d, H)) return true;
    }
    return false;
}

}  // namespace detail

/// Dip of sorted, pairwise distinct values.
inline double dip(const std::vector<double>& sorted) {
    if (sorted.size() == 1) return 0.0;
    double lo = 0.0;
    double hi = 0.5;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::feasible(sorted, mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace dipkit::oracle
