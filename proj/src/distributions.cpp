#include "dipkit/distributions.hpp"

#include "dipkit/errors.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

namespace dipkit {

namespace {

std::string fmt_num(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

double draw_standard(const Component& c, std::mt19937_64& rng) {
    switch (c.family) {
        case Family::normal:
            return std::normal_distribution<double>(0.0, 1.0)(rng);
        case Family::student_t:
            return std::student_t_distribution<double>(c.df)(rng);
        case Family::laplace: {
            std::exponential_distribution<double> e(1.0);
            return e(rng) - e(rng);
        }
        case Family::uniform:
            return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        case Family::gamma:
            return std::gamma_distribution<double>(c.shape_a, 1.0)(rng);
        case Family::exponential:
            return std::exponential_distribution<double>(1.0)(rng);
        case Family::beta: {
            const double x = std::gamma_distribution<double>(c.shape_a, 1.0)(rng);
            const double y = std::gamma_distribution<double>(c.shape_b, 1.0)(rng);
            return x / (x + y);
        }
        case Family::noncentral_t: {
            const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
            const double v = std::chi_squared_distribution<double>(c.df)(rng);
            return (z + c.nc) / std::sqrt(v / c.df);
        }
    }
    return 0.0;
}

std::vector<double> parse_args(const std::string& body, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(body);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(' ');
        const auto e = field.find_last_not_of(' ');
        if (b == std::string::npos) throw InvalidInput("empty parameter in '" + text + "'");
        field = field.substr(b, e - b + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
            throw InvalidInput("bad parameter '" + field + "' in '" + text + "'");
        }
        out.push_back(v);
    }
    return out;
}

Component parse_component(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != text.size()) {
        throw InvalidInput("cannot parse distribution '" + text + "'");
    }
    const std::string tag = text.substr(0, open);
    const auto a = parse_args(text.substr(open + 1, close - open - 1), text);
    auto need = [&](std::size_t count) {
        if (a.size() != count) {
            throw InvalidInput("'" + tag + "' takes " + std::to_string(count) + " parameters in '" + text + "'");
        }
    };
    Component c;
    if (tag == "N") {
        need(2);
        c = {Family::normal, a[0], a[1]};
    } else if (tag == "T") {
        need(3);
        c = {Family::student_t, a[1], a[2], a[0]};
    } else if (tag == "L") {
        need(2);
        c = {Family::laplace, a[0], a[1]};
    } else if (tag == "U") {
        need(2);
        c = {Family::uniform, a[0], a[1]};
    } else if (tag == "G") {
        need(3);
        c = {Family::gamma, a[1], a[2]};
        c.shape_a = a[0];
    } else if (tag == "E") {
        need(2);
        c = {Family::exponential, a[0], a[1]};
    } else if (tag == "B") {
        need(4);
        c = {Family::beta, a[2], a[3]};
        c.shape_a = a[0];
        c.shape_b = a[1];
    } else if (tag == "Tnc") {
        need(4);
        c = {Family::noncentral_t, a[2], a[3], a[0], a[1]};
    } else {
        throw InvalidInput("unknown distribution family '" + tag + "'");
    }
    c.validate();
    return c;
}

}  // namespace

void Component::validate() const {
    if (!std::isfinite(loc) || !std::isfinite(scale) || !(scale > 0.0)) {
        throw InvalidInput("distribution scale must be positive and location finite");
    }
    if ((family == Family::student_t || family == Family::noncentral_t) && !(df > 0.0)) {
        throw InvalidInput("degrees of freedom must be positive");
    }
    if (family == Family::noncentral_t && !std::isfinite(nc)) throw InvalidInput("non-centrality must be finite");
    if ((family == Family::gamma || family == Family::beta) && !(shape_a > 0.0)) {
        throw InvalidInput("shape parameters must be positive");
    }
    if (family == Family::beta && !(shape_b > 0.0)) throw InvalidInput("shape parameters must be positive");
}

std::string Component::name() const {
    const std::string l = fmt_num(loc);
    const std::string s = fmt_num(scale);
    switch (family) {
        case Family::normal: return "N(" + l + "," + s + ")";
        case Family::student_t: return "T(" + fmt_num(df) + "," + l + "," + s + ")";
        case Family::laplace: return "L(" + l + "," + s + ")";
        case Family::uniform: return "U(" + l + "," + s + ")";
        case Family::gamma: return "G(" + fmt_num(shape_a) + "," + l + "," + s + ")";
        case Family::exponential: return "E(" + l + "," + s + ")";
        case Family::beta: return "B(" + fmt_num(shape_a) + "," + fmt_num(shape_b) + "," + l + "," + s + ")";
        case Family::noncentral_t: return "Tnc(" + fmt_num(df) + "," + fmt_num(nc) + "," + l + "," + s + ")";
    }
    return "?";
}

void DistributionSpec::validate() const {
    first.validate();
    if (second) second->validate();
}

std::string DistributionSpec::name() const {
    return second ? first.name() + "+" + second->name() : first.name();
}

DistributionSpec parse_distribution(const std::string& text) {
    std::string compact;
    for (char ch : text) {
        if (ch != ' ') compact.push_back(ch);
    }
    // '+' separates components only at nesting depth zero.
    int depth = 0;
    for (std::size_t i = 0; i < compact.size(); ++i) {
        if (compact[i] == '(') ++depth;
        else if (compact[i] == ')') --depth;
        else if (compact[i] == '+' && depth == 0) {
            return DistributionSpec{parse_component(compact.substr(0, i)), parse_component(compact.substr(i + 1))};
        }
    }
    return DistributionSpec{parse_component(compact), std::nullopt};
}

GeneratedSample generate(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    std::mt19937_64 rng(seed);
    GeneratedSample out;
    out.values.reserve(n);
    out.labels.reserve(n);
    const std::size_t n_second = spec.second ? n / 2 : 0;
    const std::size_t n_first = n - n_second;
    for (std::size_t i = 0; i < n_first; ++i) {
        out.values.push_back(spec.first.loc + spec.first.scale * draw_standard(spec.first, rng));
        out.labels.push_back(0);
    }
    for (std::size_t i = 0; i < n_second; ++i) {
        out.values.push_back(spec.second->loc + spec.second->scale * draw_standard(*spec.second, rng));
        out.labels.push_back(1);
    }
    return out;
}

std::vector<DistributionSpec> standard_scenarios() {
    const char* names[] = {
        "N(4,1)", "T(4,0,1)", "L(0,2)", "U(0,2)", "G(2,-1,1)", "E(0,1)", "B(2,2,1,1)", "Tnc(4,2,0,1)",
        "N(4,1)+N(0,1)", "T(4,0,1)+T(4,4,1)", "L(0,2)+L(7,2)", "U(0,2)+U(3,2)", "G(2,-1,1)+G(2,5,1)",
        "E(0,1)+E(4,1)", "B(2,2,1,1)+B(2,2,2,1)", "Tnc(4,2,0,1)+Tnc(4,2,7,1)",
        "N(4,1)+T(4,0,1)", "N(4,1)+L(0,2)", "N(4,1)+U(0,2)", "N(4,1)+G(2,-1,1)", "N(4,1)+E(0,1)",
        "N(4,1)+B(2,2,1,1)", "N(4,1)+Tnc(4,2,0,1)",
    };
    std::vector<DistributionSpec> out;
    for (const char* n : names) out.push_back(parse_distribution(n));
    return out;
}

}  // namespace dipkit
