#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "meval/types.hpp"

namespace meval {

// Out-of-band marker between reference utterances; the only place where the
// active (speaker, channel) pair may change.
struct ChangeToken {
  friend bool operator==(ChangeToken, ChangeToken) = default;
};

using StreamItem = std::variant<ChangeToken, Word>;

// One leading change token, then each utterance's words with a change token
// between consecutive utterances.
struct ReferenceStream {
  std::string speaker;
  std::vector<StreamItem> items;
};

std::vector<ReferenceStream> build_reference_streams(const ReferenceSet& refs);

// Interned form; change tokens become kChangeToken.
Symbols intern_stream(const ReferenceStream& stream, Vocabulary& vocab);

inline constexpr std::size_t kDefaultMemoryLimit = std::size_t{2} << 30;  // 2 GiB

struct SolverOptions {
  std::size_t memory_limit = kDefaultMemoryLimit;
};

struct MatchResult {
  Cost cost = 0;
  Assignment assignment;
};

// Bytes the utterance lattice for this instance would occupy.
std::size_t mimo_lattice_bytes(const ReferenceSet& refs, const HypothesisSet& hyps);

// Minimum total edit cost over all utterance-to-channel assignments and
// cross-speaker interleavings that keep each speaker's utterance order and
// keep every utterance contiguous on one channel. Throws BudgetExceeded when
// the lattice exceeds `options.memory_limit`.
MatchResult mimo_distance(const ReferenceSet& refs, const HypothesisSet& hyps,
                          const CostConfig& costs = {}, const SolverOptions& options = {});
WerResult mimo_wer(const ReferenceSet& refs, const HypothesisSet& hyps,
                   const CostConfig& costs = {}, const SolverOptions& options = {});

inline constexpr const char* kMergedSpeakerLabel = "merged";

// All utterances as one pseudo-speaker, sorted by begin time (stable on source
// index). Throws MissingBeginTime if more than one speaker is present and any
// utterance lacks a begin time.
ReferenceSet merge_references(const ReferenceSet& refs);

// MIMO distance of the merged reference. Assignment decisions name the
// original speakers and utterance indices.
MatchResult orc_distance(const ReferenceSet& refs, const HypothesisSet& hyps,
                         const CostConfig& costs = {}, const SolverOptions& options = {});
WerResult orc_wer(const ReferenceSet& refs, const HypothesisSet& hyps,
                  const CostConfig& costs = {}, const SolverOptions& options = {});

using CostMatrix = std::vector<std::vector<Cost>>;

// Square max(K, C) matrix of distances between concatenated speaker words
// (rows) and channel words (columns); the smaller side is padded with empty
// streams.
CostMatrix pairwise_distances(const ReferenceSet& refs, const HypothesisSet& hyps,
                              const CostConfig& costs = {});

// Minimum-cost bijection row -> column of a square matrix (Hungarian method).
std::vector<std::size_t> solve_assignment(const CostMatrix& cost);

WerResult cp_wer(const ReferenceSet& refs, const HypothesisSet& hyps, const CostConfig& costs = {});

// Result of pairing padded speaker i with padded channel permutation[i].
WerResult cp_result(const ReferenceSet& refs, const HypothesisSet& hyps,
                    const std::vector<std::size_t>& permutation, const CostConfig& costs = {});

// Concatenate the assigned utterances per channel in decision order and align
// each channel; decisions on a padded channel align against nothing.
ErrorCounts assignment_counts(const ReferenceSet& refs, const HypothesisSet& hyps,
                              const Assignment& assignment, const CostConfig& costs = {});
Cost replay_cost(const ReferenceSet& refs, const HypothesisSet& hyps, const Assignment& assignment,
                 const CostConfig& costs = {});

// Describes the first violated invariant, or nullopt when every reference
// utterance appears exactly once, in per-speaker order, on a known channel.
std::optional<std::string> check_assignment(const ReferenceSet& refs, const HypothesisSet& hyps,
                                            const Assignment& assignment);

}  // namespace meval
