#pragma once

#include <cstddef>
#include <vector>

#include "meval/matchers.hpp"
#include "meval/types.hpp"

// Exhaustive reference solvers. Exponential by construction; they exist to
// audit the dynamic-programming solvers on small instances.
namespace meval::oracle {

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 20;

// Every C^U channel assignment of the time-sorted merged utterances.
MatchResult brute_force_orc(const ReferenceSet& refs, const HypothesisSet& hyps,
                            const CostConfig& costs = {},
                            std::size_t limit = kDefaultEnumerationLimit);

// Every order-preserving interleaving of the speakers' utterances crossed with
// every channel assignment.
MatchResult brute_force_mimo(const ReferenceSet& refs, const HypothesisSet& hyps,
                             const CostConfig& costs = {},
                             std::size_t limit = kDefaultEnumerationLimit);

struct PermutationResult {
  Cost cost = 0;
  std::vector<std::size_t> permutation;  // padded speaker i -> padded channel
};

// Every bijection between padded speakers and padded channels.
PermutationResult brute_force_cp(const ReferenceSet& refs, const HypothesisSet& hyps,
                                 const CostConfig& costs = {},
                                 std::size_t limit = kDefaultEnumerationLimit);

}  // namespace meval::oracle
