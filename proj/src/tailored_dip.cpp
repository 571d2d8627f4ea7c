#include "dipkit/clustering.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dipkit {

namespace {

// The 2|S| samples of `cluster` closest to the structure S, followed by every
// sample up to the far end of S. Samples between the cluster and S are included
// because a merge takes them too. `cluster_left` tells on which side the cluster lies.
std::vector<double> merge_candidate(const SortedSample& sample, Interval cluster, Interval structure,
                                    bool cluster_left) {
    const std::size_t take = std::min(2 * structure.size(), cluster.size());
    const auto v = sample.values();
    const std::size_t lo = cluster_left ? cluster.hi + 1 - take : structure.lo;
    const std::size_t hi = cluster_left ? structure.hi : cluster.lo + take - 1;
    return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(lo),
                               v.begin() + static_cast<std::ptrdiff_t>(hi + 1));
}

double pvalue_of(std::span<const double> values, const SignificanceConfig& config) {
    return config.calculator.pvalue(detail::dip_unchecked(values), values.size());
}

// A gap hides structure when either reflection of it looks multimodal. A tail
// reflected about its dense end reads as a single peak, so one side is not enough.
double gap_pvalue(const SortedSample& sample, Interval gap, const SignificanceConfig& config) {
    if (gap.size() < 2) return 1.0;
    const double p_left = pvalue_of(detail::mirrored(sample, gap, false), config);
    const double p_right = pvalue_of(detail::mirrored(sample, gap, true), config);
    return std::min(p_left, p_right);
}

}  // namespace

ClusterLabels tailored_dip(const SortedSample& sample, const SignificanceConfig& config) {
    std::vector<Interval> clusters = unidip_intervals(sample, config);
    const std::size_t n = sample.size();
    const std::size_t k = clusters.size();
    if (k == 0) return ClusterLabels::from_intervals(n, clusters);

    std::size_t g = 0;
    while (g <= k) {
        const std::size_t lo = g == 0 ? 0 : clusters[g - 1].hi + 1;
        const std::size_t hi_excl = g == k ? n : clusters[g].lo;
        if (hi_excl <= lo + 1) {
            ++g;
            continue;
        }
        const Interval gap{lo, hi_excl - 1};
        if (gap_pvalue(sample, gap, config) >= config.alpha) {
            ++g;
            continue;
        }

        const SortedSample sub = SortedSample::from_sorted(
            std::vector<double>(sample.values().begin() + static_cast<std::ptrdiff_t>(gap.lo),
                                sample.values().begin() + static_cast<std::ptrdiff_t>(gap.hi + 1)));
        std::vector<Interval> found = unidip_intervals(sub, config);
        for (auto& s : found) {
            s.lo += gap.lo;
            s.hi += gap.lo;
        }
        if (found.empty()) {
            ++g;
            continue;
        }
        const std::size_t k_new = found.size();

        double p_first = -1.0;
        double p_last = -1.0;
        if (g != 0) p_first = pvalue_of(merge_candidate(sample, clusters[g - 1], found.front(), true), config);
        if (g != k) p_last = pvalue_of(merge_candidate(sample, clusters[g], found.back(), false), config);
        bool updated = false;
        // Several structures: the first may join the left cluster and the last the right one.
        const bool both = k_new > 1;
        if (g != 0 && p_first >= config.alpha && (k_new != 1 || p_first >= p_last)) {
            clusters[g - 1].hi = found.front().hi;
            updated = true;
        }
        if ((!updated || both) && g != k && p_last >= config.alpha && (k_new != 1 || p_last > p_first)) {
            clusters[g].lo = found.back().lo;
            updated = true;
        }

        // Every merge moves a cluster edge into the gap, so this repeats at most n times.
        if (updated) continue;
        ++g;
    }
    return ClusterLabels::from_intervals(n, clusters);
}

std::vector<double> noise_boundaries(const SortedSample& sample, const ClusterLabels& labels) {
    const auto clusters = labels.intervals();
    const auto v = sample.values();
    const double n = static_cast<double>(sample.size());
    // Right-continuous ECDF at v[i], accounting for ties.
    auto ecdf = [&](std::size_t i) {
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), v[i]) - v.begin()) / n;
    };

    std::vector<Interval> sorted = clusters;
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    std::vector<double> bounds;
    for (std::size_t c = 0; c + 1 < sorted.size(); ++c) {
        const std::size_t a = sorted[c].hi;
        const std::size_t b = sorted[c + 1].lo;
        const double x1 = v[a];
        const double x2 = v[b];
        const double mid = 0.5 * (x1 + x2);
        if (b == a + 1 || x2 <= x1) {
            bounds.push_back(mid);
            continue;
        }
        // From the top of the left cluster's last step to the foot of the right
        // cluster's first step, so the line spans exactly the ECDF rise of the gap.
        const double y1 = ecdf(a);
        const double y2 = static_cast<double>(std::lower_bound(v.begin(), v.end(), x2) - v.begin()) / n;
        const double slope = (y2 - y1) / (x2 - x1);
        auto line = [&](double x) { return y1 + slope * (x - x1); };

        double best = mid;
        double best_dist = std::numeric_limits<double>::infinity();
        auto consider = [&](double x) {
            if (!(x > x1 && x < x2)) return;
            const double dist = std::fabs(x - mid);
            if (dist < best_dist) {
                best_dist = dist;
                best = x;
            }
        };
        // Walk the steps [v[i], v[i+1]) between the two clusters.
        for (std::size_t i = a; i < b; ++i) {
            if (v[i + 1] == v[i]) continue;
            const double height = ecdf(i);
            if (slope > 0.0) {
                const double xs = x1 + (height - y1) / slope;
                if (xs >= v[i] && xs < v[i + 1]) consider(xs);
            } else if (height == y1) {
                consider(std::clamp(mid, v[i], v[i + 1]));
            }
            // Vertical jump at v[i+1] from `height` up to the next level.
            if (i + 1 < b) {
                const double y = line(v[i + 1]);
                if (y >= height && y <= ecdf(i + 1)) consider(v[i + 1]);
            }
        }
        bounds.push_back(best);
    }
    return bounds;
}

ClusterLabels assign_noise(const SortedSample& sample, const ClusterLabels& labels) {
    if (labels.labels.size() != sample.size()) throw InvalidInput("labels and sample differ in length");
    if (labels.k == 0) throw InvalidInput("cannot assign noise without any cluster");
    labels.validate();
    const auto clusters = labels.intervals();
    const auto bounds = noise_boundaries(sample, labels);

    std::vector<std::size_t> by_position(clusters.size());
    for (std::size_t c = 0; c < by_position.size(); ++c) by_position[c] = c;
    std::sort(by_position.begin(), by_position.end(),
              [&](std::size_t a, std::size_t b) { return clusters[a].lo < clusters[b].lo; });

    ClusterLabels out = labels;
    const auto v = sample.values();
    std::size_t slot = 0;  // index into by_position of the cluster on the left
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        while (slot + 1 < by_position.size() && i > clusters[by_position[slot + 1]].lo) ++slot;
        if (out.labels[i] != kNoise) continue;
        const Interval left = clusters[by_position[slot]];
        if (i < left.lo) {
            out.labels[i] = static_cast<int>(by_position[slot]);
        } else if (slot + 1 == by_position.size()) {
            out.labels[i] = static_cast<int>(by_position[slot]);
        } else {
            out.labels[i] = static_cast<int>(v[i] < bounds[slot] ? by_position[slot] : by_position[slot + 1]);
        }
    }
    return out;
}

}  // namespace dipkit
