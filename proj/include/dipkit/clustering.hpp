#pragma once

#include "dipkit/dip.hpp"
#include "dipkit/significance.hpp"

#include <cstddef>
#include <vector>

namespace dipkit {

inline constexpr int kNoise = -1;

/// Inclusive index range [lo, hi] into a sorted sample.
struct Interval {
    std::size_t lo = 0;
    std::size_t hi = 0;

    std::size_t size() const noexcept { return hi - lo + 1; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Per-sample cluster ids 0..k-1, with kNoise for unassigned samples.
struct ClusterLabels {
    std::vector<int> labels;
    int k = 0;

    /// Throws InvalidInput if a label is out of range or a cluster id is unused.
    void validate() const;
    /// Labels for n samples where interval i becomes cluster i; the rest is noise.
    static ClusterLabels from_intervals(std::size_t n, const std::vector<Interval>& intervals);
    /// Cluster ranges, ordered by id. Throws InvalidInput if a cluster is not contiguous.
    std::vector<Interval> intervals() const;
    std::size_t noise_count() const;
};

/// Recursive dip-based extraction of modal intervals, returned left to right.
std::vector<Interval> unidip_intervals(const SortedSample& sample, const SignificanceConfig& config);
ClusterLabels unidip(const SortedSample& sample, const SignificanceConfig& config);

/// UniDip followed by re-testing every gap for left-over structure and merging
/// tails into the neighbouring clusters.
ClusterLabels tailored_dip(const SortedSample& sample, const SignificanceConfig& config);

/// Split points between adjacent clusters, one per pair, from the intersection
/// of the ECDF with the line joining the two clusters' ends.
std::vector<double> noise_boundaries(const SortedSample& sample, const ClusterLabels& labels);

/// Gives every noise sample to a neighbouring cluster using noise_boundaries.
ClusterLabels assign_noise(const SortedSample& sample, const ClusterLabels& labels);

namespace detail {

/// Values of [lo, hi] reflected about x[hi] (about_right) or x[lo], pivot kept once.
std::vector<double> mirrored(const SortedSample& sample, Interval range, bool about_right);

}  // namespace detail

}  // namespace dipkit
