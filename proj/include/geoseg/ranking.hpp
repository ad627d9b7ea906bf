#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "geoseg/random.hpp"

namespace geoseg::detail {

/// Orders candidates by `before` and keeps the first k. Candidates are
/// shuffled with a substream keyed on (seed, owner id) before a stable sort,
/// so equal-key groups come out in uniformly random order and every
/// admissible k-set is equally likely. Identical seeds give prefix-consistent
/// orders for growing k.
template <typename Before>
std::vector<std::uint32_t> ranked_prefix(std::vector<std::uint32_t> candidates, std::size_t k, std::uint64_t seed,
                                         std::string_view owner, Before before) {
  SplitMix64 rng(derive_seed(seed, owner));
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::stable_sort(candidates.begin(), candidates.end(), before);
  candidates.resize(std::min(k, candidates.size()));
  return candidates;
}

}  // namespace geoseg::detail
