#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dipkit {

/// A one-dimensional sample in non-decreasing order. Construction validates
/// ordering and finiteness once so that hot paths can skip the checks.
class SortedSample {
public:
    SortedSample() = default;

    /// Throws InvalidInput if `values` is empty, unsorted or non-finite.
    static SortedSample from_sorted(std::vector<double> values);
    /// Sorts a copy of `values`; throws InvalidInput on empty/non-finite input.
    static SortedSample from_unsorted(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    explicit SortedSample(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

struct ModalInterval {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/// Three sorted positions i1 < i2 < i3 whose ECDF heights realize the dip:
/// i2 lies farthest from the chord through i1 and i3.
struct ModalTriangle {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::size_t i3 = 0;

    friend bool operator==(const ModalTriangle&, const ModalTriangle&) = default;
};

struct DipResult {
    double dip = 0.0;
    ModalInterval modal_interval;
    std::optional<ModalTriangle> modal_triangle;
    /// Set for n == 1, where the dip is reported as 0.
    bool degenerate = false;
};

/// Hartigan's dip of a sorted sample in O(n).
DipResult compute_dip(const SortedSample& sample);

/// Same as compute_dip but validates a raw span first.
DipResult compute_dip(std::span<const double> sorted_values);

/// Unit-free direction in feature space. Entries must be finite and the norm
/// positive; the direction is stored as given (not normalized).
class ProjectionAxis {
public:
    explicit ProjectionAxis(Eigen::VectorXd direction);

    static ProjectionAxis unit(Eigen::Index dim, Eigen::Index index);

    const Eigen::VectorXd& direction() const noexcept { return direction_; }
    Eigen::Index dim() const noexcept { return direction_.size(); }
    ProjectionAxis normalized() const;

private:
    Eigen::VectorXd direction_;
};

struct Projection {
    SortedSample sample;
    /// order[i] is the original row that ended up at sorted position i.
    std::vector<std::size_t> order;
};

/// Projects every row of `data` onto `axis` and sorts the result (stable for ties).
Projection project_and_sort(const Eigen::MatrixXd& data, const ProjectionAxis& axis);

namespace detail {

/// Dip of values already known to be sorted and finite. No validation.
DipResult dip_unchecked(std::span<const double> x);

}  // namespace detail

}  // namespace dipkit
