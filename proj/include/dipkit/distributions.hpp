#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dipkit {

enum class Family { normal, student_t, laplace, uniform, gamma, exponential, beta, noncentral_t };

/// One distribution in location/scale form: X = loc + scale * Z, where Z is the
/// standard member of the family with the given shape parameters.
struct Component {
    Family family = Family::normal;
    double loc = 0.0;
    double scale = 1.0;
    double df = 1.0;       // student_t, noncentral_t
    double nc = 0.0;       // noncentral_t
    double shape_a = 1.0;  // gamma, beta
    double shape_b = 1.0;  // beta

    void validate() const;
    std::string name() const;
};

/// A single distribution or an even mixture of two (first gets the extra point for odd n).
struct DistributionSpec {
    Component first;
    std::optional<Component> second;

    void validate() const;
    std::string name() const;
};

/// Parses "N(4,1)", "T(4,0,1)", "L(0,2)", "U(0,2)", "G(2,-1,1)", "E(0,1)",
/// "B(2,2,1,1)", "Tnc(4,2,0,1)" and unions written "A+B". Uniform is U(loc, width).
DistributionSpec parse_distribution(const std::string& text);

struct GeneratedSample {
    std::vector<double> values;
    /// Component index per value (0 or 1).
    std::vector<int> labels;
};

GeneratedSample generate(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// The 8 unimodal scenarios, 8 same-family pairs and 7 normal-plus-other pairs.
std::vector<DistributionSpec> standard_scenarios();

}  // namespace dipkit
