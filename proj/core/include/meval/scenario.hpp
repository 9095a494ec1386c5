#pragma once

#include <cstddef>
#include <cstdint>

#include "meval/types.hpp"

namespace meval {

// Synthetic continuous-separation session: utterances round-robin over the
// speakers with strictly increasing begin times, each placed on a random
// output channel.
struct BenchScenario {
  std::size_t num_speakers = 4;
  std::size_t num_channels = 2;
  std::size_t num_utterances = 10;
  std::size_t words_per_utterance = 10;
  std::size_t vocabulary_size = 100;
  std::uint64_t seed = 0;
  // Per hypothesis word probability of a substitution, deletion or insertion.
  double corruption = 0.0;

  void validate() const;
};

struct GeneratedSession {
  ReferenceSet refs;
  HypothesisSet hyps;
};

// Pure function of the scenario fields; identical on every platform.
GeneratedSession generate_scenario(const BenchScenario& scenario);

}  // namespace meval
