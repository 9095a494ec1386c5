#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "meval/types.hpp"

namespace meval::testing {

inline Utterance timed(Words words, double begin, std::size_t source) {
  return {std::move(words), begin, source};
}

// Two speakers against one filled and one empty channel.
inline ReferenceSet example_a_refs() {
  return ReferenceSet({{"spk1", {timed({"a", "b"}, 0.0, 0)}}, {"spk2", {timed({"e", "f"}, 1.5, 1)}}});
}
inline HypothesisSet example_a_hyps() {
  return HypothesisSet::from_words({{"ch1", {"a", "b", "e", "f"}}, {"ch2", {}}});
}

inline ReferenceSet example_b_refs() {
  return ReferenceSet({{"spk1", {timed({"a", "b", "c", "d"}, 0.0, 0)}},
                       {"spk2", {timed({"e", "f", "g", "h"}, 0.1, 1)}}});
}
inline HypothesisSet example_b_hyps() {
  return HypothesisSet::from_words({{"ch1", {"a", "f", "c", "h"}}, {"ch2", {"e", "b", "g", "d"}}});
}

// spk2's utterance starts first.
inline ReferenceSet example_c_refs() {
  return ReferenceSet({{"spk1", {timed({"a", "b"}, 0.5, 0)}}, {"spk2", {timed({"c", "d", "e"}, 0.0, 1)}}});
}
inline HypothesisSet example_c_hyps() {
  return HypothesisSet::from_words({{"ch1", {"c", "a", "b", "d", "e"}}, {"ch2", {}}});
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  Words words(std::size_t max_len, std::size_t alphabet, std::size_t min_len = 0) {
    Words out(between(min_len, max_len));
    for (auto& w : out) w = std::string(1, static_cast<char>('a' + below(alphabet)));
    return out;
  }

  // Up to `max_utts` utterances in total, spread over up to `max_speakers`
  // speakers (each speaker gets at least one), all with distinct begin times.
  ReferenceSet refs(std::size_t max_speakers, std::size_t max_utts, std::size_t max_words,
                    std::size_t alphabet, std::size_t min_words = 1) {
    const std::size_t k = between(1, max_speakers);
    const std::size_t u = between(k, std::max(k, max_utts));
    std::vector<Speaker> speakers(k);
    for (std::size_t i = 0; i < k; ++i) speakers[i].label = "s" + std::to_string(i);
    std::vector<double> times(u);
    for (std::size_t i = 0; i < u; ++i) times[i] = static_cast<double>(i);
    std::shuffle(times.begin(), times.end(), rng_);
    for (std::size_t i = 0; i < u; ++i) {
      const std::size_t spk = i < k ? i : below(k);
      speakers[spk].utterances.push_back({words(max_words, alphabet, min_words), times[i], i});
    }
    return ReferenceSet(std::move(speakers));
  }

  HypothesisSet hyps(std::size_t max_channels, std::size_t max_words, std::size_t alphabet) {
    const std::size_t c = between(1, max_channels);
    std::vector<Channel> channels(c);
    for (std::size_t i = 0; i < c; ++i) channels[i] = {"h" + std::to_string(i), words(max_words, alphabet)};
    return HypothesisSet(std::move(channels));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace meval::testing
