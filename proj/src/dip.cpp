#include "dipkit/dip.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dipkit {

namespace {

void require_finite(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw InvalidInput("sample contains a non-finite value at position " + std::to_string(i));
        }
    }
}

void require_sorted(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] < v[i - 1]) {
            throw InvalidInput("sample is not sorted at position " + std::to_string(i));
        }
    }
}

}  // namespace

SortedSample SortedSample::from_sorted(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("sample is empty");
    require_finite(values);
    require_sorted(values);
    return SortedSample(std::move(values));
}

SortedSample SortedSample::from_unsorted(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("sample is empty");
    require_finite(values);
    std::sort(values.begin(), values.end());
    return SortedSample(std::move(values));
}

DipResult compute_dip(const SortedSample& sample) {
    return detail::dip_unchecked(sample.values());
}

DipResult compute_dip(std::span<const double> sorted_values) {
    if (sorted_values.empty()) throw InvalidInput("sample is empty");
    require_finite(sorted_values);
    require_sorted(sorted_values);
    return detail::dip_unchecked(sorted_values);
}

namespace detail {

// Hartigan & Hartigan (1985), AS 217, with the later corrections from the
// R `diptest` package. Indices are 1-based internally to stay close to the
// published algorithm; the dip is carried as 2n*dip until the end.
DipResult dip_unchecked(std::span<const double> xs) {
    const long n = static_cast<long>(xs.size());
    DipResult result;
    if (n == 1) {
        result.dip = 0.0;
        result.degenerate = true;
        return result;
    }
    result.modal_interval = {0, static_cast<std::size_t>(n - 1)};
    if (xs[n - 1] == xs[0]) {
        result.dip = 1.0 / (2.0 * static_cast<double>(n));
        return result;
    }

    auto x = [&](long i) { return xs[static_cast<std::size_t>(i - 1)]; };

    std::vector<long> mn(n + 1), mj(n + 1), gcm(n + 2), lcm(n + 2);

    // Convex minorant change points, scanning left to right.
    mn[1] = 1;
    for (long j = 2; j <= n; ++j) {
        mn[j] = j - 1;
        while (true) {
            const long mnj = mn[j];
            const long mnmnj = mn[mnj];
            if (mnj == 1 || (x(j) - x(mnj)) * static_cast<double>(mnj - mnmnj) <
                                (x(mnj) - x(mnmnj)) * static_cast<double>(j - mnj)) {
                break;
            }
            mn[j] = mnmnj;
        }
    }

    // Concave majorant change points, scanning right to left.
    mj[n] = n;
    for (long k = n - 1; k >= 1; --k) {
        mj[k] = k + 1;
        while (true) {
            const long mjk = mj[k];
            const long mjmjk = mj[mjk];
            if (mjk == n || (x(k) - x(mjk)) * static_cast<double>(mjk - mjmjk) <
                                (x(mjk) - x(mjmjk)) * static_cast<double>(k - mjk)) {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    long low = 1;
    long high = n;
    double dip = 1.0;
    struct Tri {
        long a = -1, b = -1, c = -1;
    };
    Tri best_triangle;

    while (true) {
        gcm[1] = high;
        long i = 1;
        for (; gcm[i] > low; ++i) gcm[i + 1] = mn[gcm[i]];
        const long l_gcm = i;
        long ig = l_gcm;
        long ix = ig - 1;

        lcm[1] = low;
        i = 1;
        for (; lcm[i] < high; ++i) lcm[i + 1] = mj[lcm[i]];
        const long l_lcm = i;
        long ih = l_lcm;
        long iv = 2;

        // Largest distance between the minorant and majorant inside [low, high].
        long double d = 0.0L;
        if (l_gcm != 2 || l_lcm != 2) {
            do {
                const long gcmix = gcm[ix];
                const long lcmiv = lcm[iv];
                long double dx;
                if (gcmix > lcmiv) {
                    const long gcmi1 = gcm[ix + 1];
                    dx = static_cast<long double>(lcmiv - gcmi1 + 1) -
                         (static_cast<long double>(x(lcmiv)) - x(gcmi1)) * (gcmix - gcmi1) /
                             (x(gcmix) - x(gcmi1));
                    ++iv;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    const long lcmiv1 = lcm[iv - 1];
                    dx = (static_cast<long double>(x(gcmix)) - x(lcmiv1)) * (lcmiv - lcmiv1) /
                             (x(lcmiv) - x(lcmiv1)) -
                         static_cast<long double>(gcmix - lcmiv1 - 1);
                    --ix;
                    if (dx >= d) {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if (ix < 1) ix = 1;
                if (iv > l_lcm) iv = l_lcm;
            } while (gcm[ix] != lcm[iv]);
        } else {
            d = 1.0L;
        }

        if (d < dip) break;

        // Dip of the convex minorant on [gcm[l_gcm], gcm[ig]].
        double dip_l = 0.0;
        Tri tri_l;
        for (long j = ig; j < l_gcm; ++j) {
            double max_t = 1.0;
            long j_best = -1;
            const long jb = gcm[j + 1];
            const long je = gcm[j];
            if (je - jb > 1 && x(je) != x(jb)) {
                const double slope = static_cast<double>(je - jb) / (x(je) - x(jb));
                for (long jj = jb; jj <= je; ++jj) {
                    const double t = static_cast<double>(jj - jb + 1) - (x(jj) - x(jb)) * slope;
                    if (max_t < t) {
                        max_t = t;
                        j_best = jj;
                    }
                }
            }
            if (dip_l < max_t) {
                dip_l = max_t;
                tri_l = j_best < 0 ? Tri{} : Tri{jb, j_best, je};
            }
        }

        // Dip of the concave majorant on [lcm[ih], lcm[l_lcm]].
        double dip_u = 0.0;
        Tri tri_u;
        for (long j = ih; j < l_lcm; ++j) {
            double max_t = 1.0;
            long j_best = -1;
            const long jb = lcm[j];
            const long je = lcm[j + 1];
            if (je - jb > 1 && x(je) != x(jb)) {
                const double slope = static_cast<double>(je - jb) / (x(je) - x(jb));
                for (long jj = jb; jj <= je; ++jj) {
                    const double t = (x(jj) - x(jb)) * slope - static_cast<double>(jj - jb - 1);
                    if (max_t < t) {
                        max_t = t;
                        j_best = jj;
                    }
                }
            }
            if (dip_u < max_t) {
                dip_u = max_t;
                tri_u = j_best < 0 ? Tri{} : Tri{jb, j_best, je};
            }
        }

        const bool upper_wins = dip_u > dip_l;
        const double dip_new = upper_wins ? dip_u : dip_l;
        if (dip < dip_new) {
            dip = dip_new;
            best_triangle = upper_wins ? tri_u : tri_l;
        }

        // Without this guard the iteration can cycle forever.
        if (low == gcm[ig] && high == lcm[ih]) break;
        low = gcm[ig];
        high = lcm[ih];
    }

    result.dip = dip / (2.0 * static_cast<double>(n));
    result.modal_interval = {static_cast<std::size_t>(low - 1), static_cast<std::size_t>(high - 1)};
    if (n <= 3) {
        result.modal_interval = {0, static_cast<std::size_t>(n - 1)};
    } else if (best_triangle.b >= 0) {
        result.modal_triangle = ModalTriangle{static_cast<std::size_t>(best_triangle.a - 1),
                                              static_cast<std::size_t>(best_triangle.b - 1),
                                              static_cast<std::size_t>(best_triangle.c - 1)};
    }
    return result;
}

}  // namespace detail

ProjectionAxis::ProjectionAxis(Eigen::VectorXd direction) : direction_(std::move(direction)) {
    if (direction_.size() == 0) throw InvalidInput("projection axis has no entries");
    if (!direction_.allFinite()) throw InvalidInput("projection axis has non-finite entries");
    if (direction_.norm() == 0.0) throw InvalidInput("projection axis is the zero vector");
}

ProjectionAxis ProjectionAxis::unit(Eigen::Index dim, Eigen::Index index) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    v(index) = 1.0;
    return ProjectionAxis(std::move(v));
}

ProjectionAxis ProjectionAxis::normalized() const {
    return ProjectionAxis(direction_ / direction_.norm());
}

Projection project_and_sort(const Eigen::MatrixXd& data, const ProjectionAxis& axis) {
    if (data.cols() != axis.dim()) {
        throw InvalidInput("axis has " + std::to_string(axis.dim()) + " entries but data has " +
                           std::to_string(data.cols()) + " columns");
    }
    if (data.rows() == 0) throw InvalidInput("data has no rows");
    const Eigen::VectorXd projected = data * axis.direction();
    std::vector<std::size_t> order(static_cast<std::size_t>(data.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return projected(static_cast<Eigen::Index>(a)) < projected(static_cast<Eigen::Index>(b));
    });
    std::vector<double> values(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) values[i] = projected(static_cast<Eigen::Index>(order[i]));
    return {SortedSample::from_sorted(std::move(values)), std::move(order)};
}

}  // namespace dipkit
