#include "dipkit/metrics.hpp"

#include "dipkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace dipkit {

namespace {

// Sums in ascending order so the result depends only on the multiset of terms.
double ordered_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

double entropy(const std::map<int, double>& counts, double n) {
    std::vector<double> terms;
    for (const auto& [label, c] : counts) {
        const double p = c / n;
        terms.push_back(-p * std::log(p));
    }
    return ordered_sum(std::move(terms));
}

}  // namespace

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw InvalidInput("label vectors differ in length");
    if (a.empty()) throw InvalidInput("label vectors are empty");
    const double n = static_cast<double>(a.size());

    std::map<int, double> ca, cb;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca[a[i]] += 1.0;
        cb[b[i]] += 1.0;
        joint[{a[i], b[i]}] += 1.0;
    }
    const double ha = entropy(ca, n);
    const double hb = entropy(cb, n);
    if (ca.size() == 1 && cb.size() == 1) return 1.0;
    if (ha == 0.0 || hb == 0.0) return 0.0;
    // Same partition under a relabeling; the sums below would round differently.
    if (joint.size() == ca.size() && joint.size() == cb.size()) return 1.0;

    std::vector<double> terms;
    for (const auto& [key, c] : joint) {
        const double pij = c / n;
        const double pi = ca[key.first] / n;
        const double pj = cb[key.second] / n;
        terms.push_back(pij * std::log(pij / (pi * pj)));
    }
    const double mi = ordered_sum(std::move(terms));
    return std::clamp(mi / (0.5 * (ha + hb)), 0.0, 1.0);
}

}  // namespace dipkit
