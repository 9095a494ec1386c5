#pragma once

#include <cstddef>
#include <vector>

#include "meval/types.hpp"

namespace meval::detail {

struct LatticeInput {
  // speakers[k][u] = words of utterance u of speaker k
  std::vector<std::vector<Symbols>> speakers;
  std::vector<Symbols> channels;
};

struct LatticeDecision {
  std::size_t speaker;
  std::size_t utterance;
  std::size_t channel;
};

struct LatticeSolution {
  Cost cost = 0;
  std::vector<LatticeDecision> decisions;  // consumption order
};

std::size_t lattice_bytes(const LatticeInput& input);

// Utterance-granularity evaluation of the constrained multi-dimensional
// Levenshtein recursion. A node is the per-speaker utterance progress; each
// node holds a dense cost tensor over hypothesis positions of all channels.
LatticeSolution solve_lattice(const LatticeInput& input, const CostConfig& costs,
                              std::size_t memory_limit);

}  // namespace meval::detail
