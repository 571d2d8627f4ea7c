#pragma once

#include "dipkit/distributions.hpp"
#include "dipkit/lookup_table.hpp"
#include "dipkit/significance.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dipkit {

struct BenchEntry {
    std::string method;
    std::size_t n = 0;
    std::string scenario;
    double seconds = 0.0;
    std::size_t count = 0;
    /// False when the method cannot serve this n (table beyond its largest size).
    bool available = true;
};

struct BenchReport {
    std::vector<BenchEntry> entries;

    /// Summed seconds of `method` at size n over all scenarios; available cells only.
    double total(const std::string& method, std::size_t n) const;
    bool any_unavailable(const std::string& method, std::size_t n) const;

    /// CSV with header `method,n,scenario,seconds`; unavailable cells print "NA".
    void write_csv(std::ostream& out) const;
    void write_summary(std::ostream& out) const;
};

struct BenchConfig {
    std::vector<DistributionSpec> scenarios;
    std::vector<std::size_t> sizes;
    std::size_t repetitions_per_cell = 100;
    std::size_t bootstrap_reps = 1000;
    std::uint64_t seed = 0;
    /// Table for the table method; when null the table method is skipped.
    const LookupTable* table = nullptr;
};

/// Times the dip-to-p conversion of each method. Sample generation and dip
/// computation are outside the timed region; bootstrap times the full resampling.
BenchReport bench_pvalue_methods(const BenchConfig& config);

/// Wall-clock seconds of running TailoredDip on every sample with `calculator`.
double time_tailored_workload(const std::vector<std::vector<double>>& sorted_samples,
                              const SignificanceConfig& config);

}  // namespace dipkit
