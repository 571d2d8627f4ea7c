#include "dipkit/significance.hpp"

#include "dipkit/bootstrap.hpp"
#include "dipkit/errors.hpp"

#include <cmath>

namespace dipkit {

PValueMethod parse_method(const std::string& name) {
    if (name == "function") return PValueMethod::function;
    if (name == "table") return PValueMethod::table;
    if (name == "bootstrap") return PValueMethod::bootstrap;
    throw InvalidInput("unknown p-value method '" + name + "' (expected function, table or bootstrap)");
}

std::string to_string(PValueMethod method) {
    switch (method) {
        case PValueMethod::function: return "function";
        case PValueMethod::table: return "table";
        case PValueMethod::bootstrap: return "bootstrap";
    }
    return "function";
}

double PValueCalculator::pvalue(double dip, std::size_t n) const {
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    if (n == 1) return 1.0;
    switch (method) {
        case PValueMethod::function:
            return pvalue_function(dip, n, shape, coeffs);
        case PValueMethod::table:
            if (table == nullptr) throw InvalidInput("table method selected but no table is loaded");
            return table->pvalue(dip, n);
        case PValueMethod::bootstrap:
            if (!(dip > 0.0 && dip <= 0.25 + 1e-12)) throw InvalidInput("dip must lie in (0, 0.25]");
            if (!cache_bootstrap) return pvalue_bootstrap(dip, n, bootstrap_reps, seed);
            return cached_null(n, bootstrap_reps, seed)->pvalue(dip);
    }
    return 1.0;
}

double PValueCalculator::pvalue(const DipResult& result, std::size_t n) const {
    if (result.degenerate) return 1.0;
    return pvalue(result.dip, n);
}

void SignificanceConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0,1)");
    calculator.shape.validate();
    calculator.coeffs.validate();
    if (calculator.bootstrap_reps == 0) throw InvalidInput("bootstrap repetitions must be at least 1");
}

}  // namespace dipkit
