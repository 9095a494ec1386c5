#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "meval/types.hpp"

namespace meval {

enum class EditKind { correct, substitute, insert, remove };

// Positions are 1-based, matching the DP matrix indices.
struct EditOp {
  EditKind kind;
  std::optional<std::size_t> ref_position;
  std::optional<std::size_t> hyp_position;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct Alignment {
  std::vector<EditOp> ops;
};

struct EditResult {
  Cost cost = 0;
  ErrorCounts counts;
  Alignment alignment;
};

// Cost-only distance in O(min(n, m)) memory.
Cost distance(std::span<const Symbol> ref, std::span<const Symbol> hyp, const CostConfig& costs = {});
Cost distance(const Words& ref, const Words& hyp, const CostConfig& costs = {});

// Distance plus one optimal alignment. Ties prefer correct/substitute, then
// deletion, then insertion.
EditResult distance_with_counts(std::span<const Symbol> ref, std::span<const Symbol> hyp,
                                const CostConfig& costs = {});
EditResult distance_with_counts(const Words& ref, const Words& hyp, const CostConfig& costs = {});

// Full (n+1) x (m+1) cost matrix, row-major.
std::vector<Cost> distance_matrix(std::span<const Symbol> ref, std::span<const Symbol> hyp,
                                  const CostConfig& costs = {});

ErrorCounts tally(const Alignment& alignment);

inline constexpr std::size_t kDefaultTensorStateLimit = 100'000'000;

// Unconstrained multi-reference, multi-hypothesis distance: every word may be
// matched on any channel, only within-sequence order is preserved. Dense over
// prod(|ref_k|+1) * prod(|hyp_c|+1) states; throws BudgetExceeded above
// `state_limit`.
Cost multidim_distance(const std::vector<Words>& refs, const std::vector<Words>& hyps,
                       const CostConfig& costs = {},
                       std::size_t state_limit = kDefaultTensorStateLimit);

namespace detail {

// a * b, saturating at SIZE_MAX.
std::size_t saturating_mul(std::size_t a, std::size_t b) noexcept;

}  // namespace detail

}  // namespace meval
