#pragma once

#include "dipkit/dip.hpp"
#include "dipkit/lookup_table.hpp"
#include "dipkit/pvalue.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace dipkit {

enum class PValueMethod { function, table, bootstrap };

/// Accepts "function", "table" or "bootstrap"; throws InvalidInput otherwise.
PValueMethod parse_method(const std::string& name);
std::string to_string(PValueMethod method);

/// Converts dips to p-values with one of the three back-ends.
struct PValueCalculator {
    PValueMethod method = PValueMethod::function;
    SigmoidShape shape;
    BCoefficients coeffs;
    /// Required for the table method; not owned.
    const LookupTable* table = nullptr;
    std::size_t bootstrap_reps = 1000;
    std::uint64_t seed = 0;
    /// Reuse one bootstrap null per sample size instead of resampling per call.
    /// Both give identical answers; caching only saves time.
    bool cache_bootstrap = true;

    /// p-value of `dip` for a sample of size n. n == 1 gives p = 1.
    double pvalue(double dip, std::size_t n) const;
    /// Uses the degenerate flag of `result` (p = 1) before dispatching.
    double pvalue(const DipResult& result, std::size_t n) const;
};

struct SignificanceConfig {
    double alpha = 0.01;
    PValueCalculator calculator;

    void validate() const;
};

}  // namespace dipkit
