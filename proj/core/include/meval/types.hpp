#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace meval {

using Word = std::string;
using Words = std::vector<Word>;

// Edit costs are integral so that every solver is exact.
using Cost = std::int64_t;

// Interned word id. Vocabulary ids are >= 0; negative ids are reserved.
using Symbol = std::int32_t;
using Symbols = std::vector<Symbol>;

inline constexpr Symbol kChangeToken = -1;

// Splits on runs of ASCII whitespace. No case folding, no punctuation handling.
Words tokenize(std::string_view text);

// Per-session word interning.
class Vocabulary {
 public:
  Symbol intern(std::string_view word);
  Symbols intern(const Words& words);
  std::size_t size() const noexcept { return index_.size(); }

 private:
  std::unordered_map<std::string, Symbol> index_;
};

struct CostConfig {
  Cost correct = 0;
  Cost substitution = 1;
  Cost insertion = 1;
  Cost deletion = 1;

  // Throws std::invalid_argument on negative costs or correct > substitution.
  void validate() const;
  Cost max_cost() const noexcept;

  friend bool operator==(const CostConfig&, const CostConfig&) = default;
};

struct Utterance {
  Words words;
  std::optional<double> begin_time;
  std::size_t source_index = 0;
  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Speaker {
  std::string label;
  std::vector<Utterance> utterances;

  std::size_t word_count() const noexcept;
  Words concatenated() const;
  friend bool operator==(const Speaker&, const Speaker&) = default;
};

// Reference speakers keyed by label (sorted). Utterances of each speaker are
// ordered by begin time when every utterance has one, otherwise by source
// index. That order is fixed for all solvers.
class ReferenceSet {
 public:
  ReferenceSet() = default;
  explicit ReferenceSet(std::vector<Speaker> speakers);

  // Convenience for tests and tools: label -> utterances as word lists.
  // Source indices are assigned in argument order, no begin times.
  static ReferenceSet from_words(
      const std::vector<std::pair<std::string, std::vector<Words>>>& speakers);

  const std::vector<Speaker>& speakers() const noexcept { return speakers_; }
  std::size_t size() const noexcept { return speakers_.size(); }
  bool empty() const noexcept { return speakers_.empty(); }
  std::size_t word_count() const noexcept;
  std::size_t utterance_count() const noexcept;
  const Speaker* find(std::string_view label) const;

 private:
  std::vector<Speaker> speakers_;
};

struct Channel {
  std::string label;
  Words words;
  friend bool operator==(const Channel&, const Channel&) = default;
};

// Hypothesis output channels keyed by label (sorted). Empty channels allowed.
class HypothesisSet {
 public:
  HypothesisSet() = default;
  explicit HypothesisSet(std::vector<Channel> channels);

  static HypothesisSet from_words(const std::vector<std::pair<std::string, Words>>& channels);

  const std::vector<Channel>& channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return channels_.size(); }
  bool empty() const noexcept { return channels_.empty(); }
  std::size_t word_count() const noexcept;
  const Channel* find(std::string_view label) const;

 private:
  std::vector<Channel> channels_;
};

struct ErrorCounts {
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t correct = 0;
  std::uint64_t ref_length = 0;

  std::uint64_t errors() const noexcept { return substitutions + insertions + deletions; }

  friend bool operator==(const ErrorCounts&, const ErrorCounts&) = default;
};

// Fieldwise sum. Throws std::overflow_error if any field would wrap.
ErrorCounts combine(const ErrorCounts& a, const ErrorCounts& b);

// Exact error rate. `defined()` is false only for errors > 0 over zero words;
// 0/0 is defined as zero.
struct Rate {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  bool defined() const noexcept { return denominator != 0 || numerator == 0; }
  double value() const noexcept;
  std::string fraction() const;
  // Fixed six decimals, rounded half-up from the exact fraction.
  // "undefined" when !defined().
  std::string decimal() const;

  friend bool operator==(const Rate&, const Rate&) = default;
};

Rate error_rate(const ErrorCounts& counts);

struct AssignmentDecision {
  std::string speaker;
  std::size_t utterance = 0;  // index within the speaker's ordered utterances
  std::optional<std::string> channel;  // nullopt: padded (empty) channel

  friend bool operator==(const AssignmentDecision&, const AssignmentDecision&) = default;
};

// Speaker/channel pairing chosen by a permutation-based metric. nullopt marks
// a padded dummy on that side.
struct SpeakerChannelPair {
  std::optional<std::string> speaker;
  std::optional<std::string> channel;

  friend bool operator==(const SpeakerChannelPair&, const SpeakerChannelPair&) = default;
};

// Decisions are listed in the order the solver consumed the utterances.
struct Assignment {
  std::vector<AssignmentDecision> decisions;
  std::vector<SpeakerChannelPair> pairs;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct WerResult {
  ErrorCounts counts;
  Rate rate;
  Assignment assignment;

  friend bool operator==(const WerResult&, const WerResult&) = default;
};

WerResult make_result(const ErrorCounts& counts, Assignment assignment);

}  // namespace meval
