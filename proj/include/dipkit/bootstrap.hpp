#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace dipkit {

/// Seed of the independent stream used by repetition `index`. Streams do not
/// depend on how repetitions are split across threads.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Dips of `repetitions` uniform samples of size n, sorted ascending.
/// `workers` = 0 picks the hardware concurrency; results do not depend on it.
std::vector<double> bootstrap_dips(std::size_t n, std::size_t repetitions, std::uint64_t seed,
                                   unsigned workers = 0);

/// Fraction of bootstrap dips that are >= dip.
double pvalue_bootstrap(double dip, std::size_t n, std::size_t repetitions, std::uint64_t seed);

/// Sorted null dips for one (n, repetitions, seed). Querying it gives the same
/// answer as pvalue_bootstrap with the same arguments.
class BootstrapNull {
public:
    BootstrapNull(std::size_t n, std::size_t repetitions, std::uint64_t seed);

    double pvalue(double dip) const;
    std::size_t n() const noexcept { return n_; }
    const std::vector<double>& dips() const noexcept { return dips_; }

private:
    std::size_t n_;
    std::vector<double> dips_;
};

/// Process-wide memo of BootstrapNull objects; thread-safe.
std::shared_ptr<const BootstrapNull> cached_null(std::size_t n, std::size_t repetitions,
                                                 std::uint64_t seed);

}  // namespace dipkit
