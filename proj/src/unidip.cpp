#include "dipkit/clustering.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <string>

namespace dipkit {

void ClusterLabels::validate() const {
    if (k < 0) throw InvalidInput("cluster count must be non-negative");
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int l : labels) {
        if (l < kNoise || l >= k) throw InvalidInput("label " + std::to_string(l) + " outside [-1, k)");
        if (l >= 0) seen[static_cast<std::size_t>(l)] = true;
    }
    for (int c = 0; c < k; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) throw InvalidInput("cluster " + std::to_string(c) + " is empty");
    }
}

ClusterLabels ClusterLabels::from_intervals(std::size_t n, const std::vector<Interval>& intervals) {
    ClusterLabels out;
    out.labels.assign(n, kNoise);
    out.k = static_cast<int>(intervals.size());
    for (std::size_t c = 0; c < intervals.size(); ++c) {
        for (std::size_t i = intervals[c].lo; i <= intervals[c].hi; ++i) out.labels[i] = static_cast<int>(c);
    }
    return out;
}

std::vector<Interval> ClusterLabels::intervals() const {
    std::vector<Interval> out(static_cast<std::size_t>(k));
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l < 0) continue;
        auto& iv = out[static_cast<std::size_t>(l)];
        if (!seen[static_cast<std::size_t>(l)]) {
            seen[static_cast<std::size_t>(l)] = true;
            iv = {i, i};
        } else if (iv.hi + 1 != i) {
            throw InvalidInput("cluster " + std::to_string(l) + " is not contiguous");
        } else {
            iv.hi = i;
        }
    }
    return out;
}

std::size_t ClusterLabels::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

namespace detail {

std::vector<double> mirrored(const SortedSample& sample, Interval range, bool about_right) {
    const auto v = sample.values();
    std::vector<double> out;
    out.reserve(2 * range.size() - 1);
    if (about_right) {
        const double pivot = v[range.hi];
        for (std::size_t i = range.lo; i <= range.hi; ++i) out.push_back(v[i]);
        for (std::size_t i = range.hi; i-- > range.lo;) out.push_back(2.0 * pivot - v[i]);
    } else {
        const double pivot = v[range.lo];
        for (std::size_t i = range.hi; i > range.lo; --i) out.push_back(2.0 * pivot - v[i]);
        for (std::size_t i = range.lo; i <= range.hi; ++i) out.push_back(v[i]);
    }
    return out;
}

}  // namespace detail

namespace {

struct UniDip {
    const SortedSample& sample;
    const SignificanceConfig& config;

    double pvalue_of(std::span<const double> values) const {
        const DipResult r = detail::dip_unchecked(values);
        return config.calculator.pvalue(r, values.size());
    }

    // Flank test: the flank together with the neighbouring cluster. A second
    // mode in the flank makes the pair multimodal.
    bool flank_significant(Interval with_cluster) const {
        return pvalue_of(sample.values().subspan(with_cluster.lo, with_cluster.size())) < config.alpha;
    }

    // The modal interval of a region whose density peaks at one of its ends
    // (a tail cut off by a neighbouring cluster) is a sliver near that end.
    // Reflecting about the end restores the full peak; when the reflected
    // modal interval straddles the pivot its original-side half is used.
    Interval edge_modal(Interval range, Interval modal) const {
        if (range.size() < 4) return modal;
        Interval best = modal;
        const std::size_t pivot = range.size() - 1;  // position of the pivot in the reflection
        for (bool about_right : {false, true}) {
            const auto m = detail::mirrored(sample, range, about_right);
            const DipResult r = detail::dip_unchecked(m);
            if (r.modal_interval.lo > pivot || r.modal_interval.hi < pivot) continue;
            Interval cand = about_right ? Interval{range.lo + r.modal_interval.lo, range.hi}
                                        : Interval{range.lo, range.lo + (r.modal_interval.hi - pivot)};
            if (cand.size() > best.size()) best = cand;
        }
        return best;
    }

    std::vector<Interval> run(Interval range, bool is_modal) const {
        const auto values = sample.values().subspan(range.lo, range.size());
        const DipResult r = detail::dip_unchecked(values);
        const double p = config.calculator.pvalue(r, values.size());
        const Interval modal{range.lo + r.modal_interval.lo, range.lo + r.modal_interval.hi};
        if (p >= config.alpha) return {is_modal ? range : edge_modal(range, modal)};
        if (modal == range) return {range};

        std::vector<Interval> mid = run(modal, true);
        std::vector<Interval> out;
        if (modal.lo > range.lo && flank_significant({range.lo, mid.front().hi})) {
            out = run({range.lo, modal.lo - 1}, false);
        }
        out.insert(out.end(), mid.begin(), mid.end());
        if (modal.hi < range.hi && flank_significant({mid.back().lo, range.hi})) {
            const auto right = run({modal.hi + 1, range.hi}, false);
            out.insert(out.end(), right.begin(), right.end());
        }
        return out;
    }
};

}  // namespace

std::vector<Interval> unidip_intervals(const SortedSample& sample, const SignificanceConfig& config) {
    config.validate();
    if (sample.size() == 0) throw InvalidInput("sample is empty");
    const UniDip ud{sample, config};
    auto intervals = ud.run({0, sample.size() - 1}, false);
    // A flank cut from a cluster starts with that cluster's tail, which the
    // recursion can report as a mode of its own. Neighbours whose joint span is
    // unimodal describe one mode and are joined.
    std::vector<Interval> merged;
    for (const auto& iv : intervals) {
        merged.push_back(iv);
        while (merged.size() >= 2) {
            const Interval a = merged[merged.size() - 2];
            const Interval b = merged.back();
            const Interval joint{a.lo, std::max(a.hi, b.hi)};
            if (ud.pvalue_of(sample.values().subspan(joint.lo, joint.size())) < config.alpha) break;
            merged.pop_back();
            merged.back() = joint;
        }
    }
    return merged;
}

ClusterLabels unidip(const SortedSample& sample, const SignificanceConfig& config) {
    return ClusterLabels::from_intervals(sample.size(), unidip_intervals(sample, config));
}

}  // namespace dipkit
