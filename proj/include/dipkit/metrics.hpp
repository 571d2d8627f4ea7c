#pragma once

#include <vector>

namespace dipkit {

/// Normalized mutual information with the arithmetic mean of the two entropies
/// as normalizer. Every label value, including -1, is a cluster of its own.
/// Two constant labelings score 1. Symmetric bit for bit.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace dipkit
