#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

// Distinct sorted values; a mix of shapes so that modes appear in varied places.
inline std::vector<double> sorted_sample(Rng& rng, std::size_t n) {
    std::vector<double> x(n);
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        switch (kind) {
            case 0: x[i] = u(rng); break;
            case 1: x[i] = z(rng); break;
            case 2: x[i] = (u(rng) < 0.5 ? -3.0 : 3.0) + z(rng); break;
            default: x[i] = std::exp(z(rng)); break;
        }
    }
    std::sort(x.begin(), x.end());
    return x;
}

inline std::vector<double> normal_sorted(Rng& rng, std::size_t n, double mean, double sd) {
    std::normal_distribution<double> z(mean, sd);
    std::vector<double> x(n);
    for (auto& v : x) v = z(rng);
    std::sort(x.begin(), x.end());
    return x;
}

// Two well separated blobs in d dimensions, bimodal along the first coordinate.
inline Eigen::MatrixXd blobs(Rng& rng, std::size_t n, Eigen::Index d, double gap) {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), d);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = z(rng);
        if (i % 2 == 1) m(i, 0) += gap;
    }
    return m;
}

inline Eigen::VectorXd random_axis(Rng& rng, Eigen::Index d) {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::VectorXd a(d);
    for (Eigen::Index j = 0; j < d; ++j) a(j) = z(rng);
    return a.normalized();
}

}  // namespace gen
