#include "meval/scenario.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace meval {

namespace {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so draws are derived from raw output.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

std::string vocab_word(std::size_t id) { return "w" + std::to_string(id); }

}  // namespace

void BenchScenario::validate() const {
  if (num_speakers == 0 || num_channels == 0 || num_utterances == 0 || words_per_utterance == 0 ||
      vocabulary_size == 0)
    throw std::invalid_argument("scenario sizes must be positive");
  if (!(corruption >= 0.0 && corruption <= 1.0))
    throw std::invalid_argument("corruption must lie in [0, 1]");
}

GeneratedSession generate_scenario(const BenchScenario& s) {
  s.validate();
  Draw draw(s.seed);
  std::vector<Speaker> speakers(s.num_speakers);
  for (std::size_t k = 0; k < s.num_speakers; ++k) speakers[k].label = "spk" + std::to_string(k);
  std::vector<Channel> channels(s.num_channels);
  for (std::size_t c = 0; c < s.num_channels; ++c) channels[c].label = "ch" + std::to_string(c);

  for (std::size_t i = 0; i < s.num_utterances; ++i) {
    Utterance utt;
    utt.begin_time = static_cast<double>(i);
    utt.source_index = i;
    for (std::size_t w = 0; w < s.words_per_utterance; ++w)
      utt.words.push_back(vocab_word(draw.below(s.vocabulary_size)));

    auto& out = channels[draw.below(s.num_channels)].words;
    for (const auto& word : utt.words) {
      if (s.corruption > 0.0 && draw.unit() < s.corruption) {
        switch (draw.below(3)) {
          case 0: {  // substitution, never by the same word
            std::string other = word;
            if (s.vocabulary_size > 1)
              while (other == word) other = vocab_word(draw.below(s.vocabulary_size));
            out.push_back(other);
            break;
          }
          case 1:  // deletion
            break;
          default:  // insertion after the word
            out.push_back(word);
            out.push_back(vocab_word(draw.below(s.vocabulary_size)));
            break;
        }
      } else {
        out.push_back(word);
      }
    }
    speakers[i % s.num_speakers].utterances.push_back(std::move(utt));
  }
  return {ReferenceSet(std::move(speakers)), HypothesisSet(std::move(channels))};
}

}  // namespace meval
