#pragma once

#include <cstdint>
#include <vector>

namespace sffcc {

// Exact minimum-weight perfect matching on a complete graph given a symmetric
// non-negative weight matrix (n even; n = 0 allowed). Returns mate[i].
// O(n^3) blossom algorithm.
std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int64_t>> &w);

// Exhaustive oracle: bitmask DP over pairings, n <= 20.
std::vector<int> min_weight_perfect_matching_exhaustive(const std::vector<std::vector<int64_t>> &w);

int64_t matching_weight(const std::vector<std::vector<int64_t>> &w, const std::vector<int> &mate);

} // namespace sffcc
