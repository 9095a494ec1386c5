#include "meval/types.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace meval {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void check_words(const Words& words, std::string_view owner) {
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("empty word in " + std::string(owner));
    if (std::any_of(w.begin(), w.end(), is_space))
      throw std::invalid_argument("word with whitespace in " + std::string(owner) + ": '" + w + "'");
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw std::overflow_error("error count overflow");
  return a + b;
}

}  // namespace

Words tokenize(std::string_view text) {
  Words out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Symbol Vocabulary::intern(std::string_view word) {
  auto [it, inserted] = index_.try_emplace(std::string(word), static_cast<Symbol>(index_.size()));
  if (inserted && index_.size() > static_cast<std::size_t>(std::numeric_limits<Symbol>::max()))
    throw std::length_error("vocabulary too large");
  return it->second;
}

Symbols Vocabulary::intern(const Words& words) {
  Symbols out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(intern(w));
  return out;
}

void CostConfig::validate() const {
  if (correct < 0 || substitution < 0 || insertion < 0 || deletion < 0)
    throw std::invalid_argument("edit costs must be non-negative");
  if (correct > substitution)
    throw std::invalid_argument("correct cost must not exceed substitution cost");
}

Cost CostConfig::max_cost() const noexcept {
  return std::max({correct, substitution, insertion, deletion});
}

std::size_t Speaker::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.words.size();
  return n;
}

Words Speaker::concatenated() const {
  Words out;
  out.reserve(word_count());
  for (const auto& u : utterances) out.insert(out.end(), u.words.begin(), u.words.end());
  return out;
}

ReferenceSet::ReferenceSet(std::vector<Speaker> speakers) : speakers_(std::move(speakers)) {
  std::sort(speakers_.begin(), speakers_.end(),
            [](const Speaker& a, const Speaker& b) { return a.label < b.label; });
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < speakers_.size(); ++i) {
    auto& spk = speakers_[i];
    if (spk.label.empty()) throw std::invalid_argument("empty speaker label");
    if (i > 0 && speakers_[i - 1].label == spk.label)
      throw std::invalid_argument("duplicate speaker label: " + spk.label);
    for (const auto& u : spk.utterances) {
      check_words(u.words, "speaker " + spk.label);
      if (u.begin_time && !(*u.begin_time >= 0.0))
        throw std::invalid_argument("negative or NaN begin time for speaker " + spk.label);
      if (!seen.insert(u.source_index).second)
        throw std::invalid_argument("duplicate source index " + std::to_string(u.source_index));
    }
    const bool timed = std::all_of(spk.utterances.begin(), spk.utterances.end(),
                                   [](const Utterance& u) { return u.begin_time.has_value(); });
    if (timed) {
      std::sort(spk.utterances.begin(), spk.utterances.end(),
                [](const Utterance& a, const Utterance& b) {
                  if (*a.begin_time != *b.begin_time) return *a.begin_time < *b.begin_time;
                  return a.source_index < b.source_index;
                });
    } else {
      std::sort(spk.utterances.begin(), spk.utterances.end(),
                [](const Utterance& a, const Utterance& b) { return a.source_index < b.source_index; });
    }
  }
}

ReferenceSet ReferenceSet::from_words(
    const std::vector<std::pair<std::string, std::vector<Words>>>& speakers) {
  std::vector<Speaker> out;
  std::size_t index = 0;
  for (const auto& [label, utterances] : speakers) {
    Speaker spk{label, {}};
    for (const auto& words : utterances) spk.utterances.push_back({words, std::nullopt, index++});
    out.push_back(std::move(spk));
  }
  return ReferenceSet(std::move(out));
}

std::size_t ReferenceSet::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : speakers_) n += s.word_count();
  return n;
}

std::size_t ReferenceSet::utterance_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : speakers_) n += s.utterances.size();
  return n;
}

const Speaker* ReferenceSet::find(std::string_view label) const {
  for (const auto& s : speakers_)
    if (s.label == label) return &s;
  return nullptr;
}

HypothesisSet::HypothesisSet(std::vector<Channel> channels) : channels_(std::move(channels)) {
  std::sort(channels_.begin(), channels_.end(),
            [](const Channel& a, const Channel& b) { return a.label < b.label; });
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].label.empty()) throw std::invalid_argument("empty channel label");
    if (i > 0 && channels_[i - 1].label == channels_[i].label)
      throw std::invalid_argument("duplicate channel label: " + channels_[i].label);
    check_words(channels_[i].words, "channel " + channels_[i].label);
  }
}

HypothesisSet HypothesisSet::from_words(const std::vector<std::pair<std::string, Words>>& channels) {
  std::vector<Channel> out;
  for (const auto& [label, words] : channels) out.push_back({label, words});
  return HypothesisSet(std::move(out));
}

std::size_t HypothesisSet::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : channels_) n += c.words.size();
  return n;
}

const Channel* HypothesisSet::find(std::string_view label) const {
  for (const auto& c : channels_)
    if (c.label == label) return &c;
  return nullptr;
}

ErrorCounts combine(const ErrorCounts& a, const ErrorCounts& b) {
  return {checked_add(a.substitutions, b.substitutions), checked_add(a.insertions, b.insertions),
          checked_add(a.deletions, b.deletions), checked_add(a.correct, b.correct),
          checked_add(a.ref_length, b.ref_length)};
}

double Rate::value() const noexcept {
  if (denominator == 0)
    return numerator == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string Rate::fraction() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

std::string Rate::decimal() const {
  if (!defined()) return "undefined";
  if (denominator == 0) return "0.000000";
  // Long division to six places, then half-up on the remainder.
  std::uint64_t whole = numerator / denominator;
  std::uint64_t rem = numerator % denominator;
  std::uint64_t frac = 0;
  for (int digit = 0; digit < 6; ++digit) {
    // rem < denominator; split rem * 10 to stay within 64 bits.
    std::uint64_t next = 0;
    for (int i = 0; i < 10; ++i) {
      next += rem;
      if (next >= denominator) {
        next -= denominator;
        ++frac;
      }
    }
    if (digit < 5) frac *= 10;
    rem = next;
  }
  if (rem >= denominator - rem) ++frac;
  if (frac == 1000000) {
    frac = 0;
    ++whole;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu.%06llu", static_cast<unsigned long long>(whole),
                static_cast<unsigned long long>(frac));
  return buf;
}

Rate error_rate(const ErrorCounts& counts) { return {counts.errors(), counts.ref_length}; }

WerResult make_result(const ErrorCounts& counts, Assignment assignment) {
  return {counts, error_rate(counts), std::move(assignment)};
}

}  // namespace meval
