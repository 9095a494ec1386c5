#include "meval/matchers.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lattice.hpp"
#include "meval/errors.hpp"
#include "meval/levenshtein.hpp"

namespace meval {

namespace {

struct Origin {
  std::size_t speaker;
  std::size_t utterance;
};

detail::LatticeInput lattice_input(const ReferenceSet& refs, const HypothesisSet& hyps) {
  Vocabulary vocab;
  detail::LatticeInput input;
  for (const auto& stream : build_reference_streams(refs)) {
    const Symbols symbols = intern_stream(stream, vocab);
    std::vector<Symbols> utterances;
    for (const Symbol s : symbols) {
      if (s == kChangeToken)
        utterances.emplace_back();
      else
        utterances.back().push_back(s);
    }
    input.speakers.push_back(std::move(utterances));
  }
  for (const auto& ch : hyps.channels()) input.channels.push_back(vocab.intern(ch.words));
  return input;
}

void require_channels(const HypothesisSet& hyps) {
  if (hyps.empty()) throw std::invalid_argument("at least one hypothesis channel is required");
}

// Sorted utterance order of the merged reference, with the origin of each.
std::vector<Origin> merged_order(const ReferenceSet& refs) {
  std::vector<Origin> order;
  const auto& speakers = refs.speakers();
  for (std::size_t k = 0; k < speakers.size(); ++k)
    for (std::size_t u = 0; u < speakers[k].utterances.size(); ++u) order.push_back({k, u});
  if (speakers.size() <= 1) return order;

  for (const auto& o : order) {
    const auto& utt = speakers[o.speaker].utterances[o.utterance];
    if (!utt.begin_time)
      throw MissingBeginTime("missing begin time for utterance " + std::to_string(o.utterance) +
                             " of speaker " + speakers[o.speaker].label + " (source index " +
                             std::to_string(utt.source_index) + ")");
  }
  auto at = [&](const Origin& o) -> const Utterance& {
    return speakers[o.speaker].utterances[o.utterance];
  };
  std::stable_sort(order.begin(), order.end(), [&](const Origin& a, const Origin& b) {
    const auto& ua = at(a);
    const auto& ub = at(b);
    if (*ua.begin_time != *ub.begin_time) return *ua.begin_time < *ub.begin_time;
    return ua.source_index < ub.source_index;
  });
  return order;
}

}  // namespace

std::vector<ReferenceStream> build_reference_streams(const ReferenceSet& refs) {
  std::vector<ReferenceStream> streams;
  for (const auto& spk : refs.speakers()) {
    ReferenceStream stream{spk.label, {}};
    for (const auto& utt : spk.utterances) {
      stream.items.emplace_back(ChangeToken{});
      for (const auto& w : utt.words) stream.items.emplace_back(w);
    }
    streams.push_back(std::move(stream));
  }
  return streams;
}

Symbols intern_stream(const ReferenceStream& stream, Vocabulary& vocab) {
  Symbols out;
  out.reserve(stream.items.size());
  for (const auto& item : stream.items) {
    if (std::holds_alternative<ChangeToken>(item))
      out.push_back(kChangeToken);
    else
      out.push_back(vocab.intern(std::get<Word>(item)));
  }
  return out;
}

std::size_t mimo_lattice_bytes(const ReferenceSet& refs, const HypothesisSet& hyps) {
  return detail::lattice_bytes(lattice_input(refs, hyps));
}

MatchResult mimo_distance(const ReferenceSet& refs, const HypothesisSet& hyps,
                          const CostConfig& costs, const SolverOptions& options) {
  require_channels(hyps);
  const auto solution = detail::solve_lattice(lattice_input(refs, hyps), costs, options.memory_limit);
  MatchResult result{solution.cost, {}};
  for (const auto& d : solution.decisions)
    result.assignment.decisions.push_back(
        {refs.speakers()[d.speaker].label, d.utterance, hyps.channels()[d.channel].label});
  return result;
}

WerResult mimo_wer(const ReferenceSet& refs, const HypothesisSet& hyps, const CostConfig& costs,
                   const SolverOptions& options) {
  auto match = mimo_distance(refs, hyps, costs, options);
  const auto counts = assignment_counts(refs, hyps, match.assignment, costs);
  return make_result(counts, std::move(match.assignment));
}

ReferenceSet merge_references(const ReferenceSet& refs) {
  Speaker merged{kMergedSpeakerLabel, {}};
  for (const auto& o : merged_order(refs))
    merged.utterances.push_back(refs.speakers()[o.speaker].utterances[o.utterance]);
  if (merged.utterances.empty()) return {};
  // Re-normalizing keeps this order: either every utterance is timed and the
  // sort key is identical, or there is a single speaker in source order.
  return ReferenceSet({std::move(merged)});
}

MatchResult orc_distance(const ReferenceSet& refs, const HypothesisSet& hyps,
                         const CostConfig& costs, const SolverOptions& options) {
  require_channels(hyps);
  const auto order = merged_order(refs);
  Vocabulary vocab;
  detail::LatticeInput input;
  auto& merged = input.speakers.emplace_back();
  for (const auto& o : order)
    merged.push_back(vocab.intern(refs.speakers()[o.speaker].utterances[o.utterance].words));
  if (order.empty()) input.speakers.clear();
  for (const auto& ch : hyps.channels()) input.channels.push_back(vocab.intern(ch.words));

  const auto solution = detail::solve_lattice(input, costs, options.memory_limit);
  MatchResult result{solution.cost, {}};
  for (const auto& d : solution.decisions) {
    const Origin& o = order[d.utterance];
    result.assignment.decisions.push_back(
        {refs.speakers()[o.speaker].label, o.utterance, hyps.channels()[d.channel].label});
  }
  return result;
}

WerResult orc_wer(const ReferenceSet& refs, const HypothesisSet& hyps, const CostConfig& costs,
                  const SolverOptions& options) {
  auto match = orc_distance(refs, hyps, costs, options);
  const auto counts = assignment_counts(refs, hyps, match.assignment, costs);
  return make_result(counts, std::move(match.assignment));
}

CostMatrix pairwise_distances(const ReferenceSet& refs, const HypothesisSet& hyps,
                              const CostConfig& costs) {
  costs.validate();
  const std::size_t n = std::max(refs.size(), hyps.size());
  Vocabulary vocab;
  std::vector<Symbols> rows(n), cols(n);
  for (std::size_t i = 0; i < refs.size(); ++i) rows[i] = vocab.intern(refs.speakers()[i].concatenated());
  for (std::size_t j = 0; j < hyps.size(); ++j) cols[j] = vocab.intern(hyps.channels()[j].words);
  CostMatrix m(n, std::vector<Cost>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = distance(rows[i], cols[j], costs);
  return m;
}

std::vector<std::size_t> solve_assignment(const CostMatrix& cost) {
  // Shortest augmenting path with row/column potentials, O(n^3).
  const std::size_t n = cost.size();
  for (const auto& row : cost)
    if (row.size() != n) throw std::invalid_argument("assignment matrix must be square");
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> u(n + 1, 0), v(n + 1, 0), min_to(n + 1);
  std::vector<std::size_t> match_col(n + 1, 0), way(n + 1, 0);  // 1-based, 0 = none
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match_col[0] = i;
    std::size_t j0 = 0;
    std::fill(min_to.begin(), min_to.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match_col[j0];
      Cost delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (reduced < min_to[j]) {
          min_to[j] = reduced;
          way[j] = j0;
        }
        if (min_to[j] < delta) {
          delta = min_to[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          min_to[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match_col[j] - 1] = j - 1;
  return row_to_col;
}

WerResult cp_wer(const ReferenceSet& refs, const HypothesisSet& hyps, const CostConfig& costs) {
  return cp_result(refs, hyps, solve_assignment(pairwise_distances(refs, hyps, costs)), costs);
}

WerResult cp_result(const ReferenceSet& refs, const HypothesisSet& hyps,
                    const std::vector<std::size_t>& permutation, const CostConfig& costs) {
  if (permutation.size() != std::max(refs.size(), hyps.size()))
    throw std::invalid_argument("permutation size must equal max(speakers, channels)");
  Assignment assignment;
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    SpeakerChannelPair pair;
    if (i < refs.size()) pair.speaker = refs.speakers()[i].label;
    if (permutation[i] < hyps.size()) pair.channel = hyps.channels()[permutation[i]].label;
    assignment.pairs.push_back(pair);
    if (i < refs.size())
      for (std::size_t u = 0; u < refs.speakers()[i].utterances.size(); ++u)
        assignment.decisions.push_back({*pair.speaker, u, pair.channel});
  }
  const auto counts = assignment_counts(refs, hyps, assignment, costs);
  return make_result(counts, std::move(assignment));
}

namespace {

// Reference words per channel label in decision order; nullopt key = padding.
std::map<std::optional<std::string>, Words> channel_references(const ReferenceSet& refs,
                                                               const Assignment& assignment) {
  std::map<std::optional<std::string>, Words> out;
  for (const auto& d : assignment.decisions) {
    const Speaker* spk = refs.find(d.speaker);
    if (!spk || d.utterance >= spk->utterances.size())
      throw std::invalid_argument("assignment names an unknown utterance");
    const auto& words = spk->utterances[d.utterance].words;
    auto& dst = out[d.channel];
    dst.insert(dst.end(), words.begin(), words.end());
  }
  return out;
}

template <class PerChannel>
void for_each_channel(const ReferenceSet& refs, const HypothesisSet& hyps,
                      const Assignment& assignment, PerChannel&& fn) {
  auto by_channel = channel_references(refs, assignment);
  static const Words kNothing;
  for (const auto& ch : hyps.channels()) {
    auto it = by_channel.find(ch.label);
    fn(it == by_channel.end() ? kNothing : it->second, ch.words);
    if (it != by_channel.end()) by_channel.erase(it);
  }
  for (const auto& [label, words] : by_channel) {
    if (label) throw std::invalid_argument("assignment names an unknown channel: " + *label);
    fn(words, kNothing);
  }
}

}  // namespace

ErrorCounts assignment_counts(const ReferenceSet& refs, const HypothesisSet& hyps,
                              const Assignment& assignment, const CostConfig& costs) {
  ErrorCounts total;
  for_each_channel(refs, hyps, assignment, [&](const Words& ref, const Words& hyp) {
    total = combine(total, distance_with_counts(ref, hyp, costs).counts);
  });
  return total;
}

Cost replay_cost(const ReferenceSet& refs, const HypothesisSet& hyps, const Assignment& assignment,
                 const CostConfig& costs) {
  Cost total = 0;
  for_each_channel(refs, hyps, assignment,
                   [&](const Words& ref, const Words& hyp) { total += distance(ref, hyp, costs); });
  return total;
}

std::optional<std::string> check_assignment(const ReferenceSet& refs, const HypothesisSet& hyps,
                                            const Assignment& assignment) {
  std::map<std::string, std::size_t> next;
  for (const auto& spk : refs.speakers()) next[spk.label] = 0;
  for (const auto& d : assignment.decisions) {
    auto it = next.find(d.speaker);
    if (it == next.end()) return "unknown speaker " + d.speaker;
    if (d.utterance != it->second)
      return "speaker " + d.speaker + " utterance " + std::to_string(d.utterance) +
             " out of order (expected " + std::to_string(it->second) + ")";
    ++it->second;
    if (d.channel && !hyps.find(*d.channel)) return "unknown channel " + *d.channel;
  }
  for (const auto& spk : refs.speakers())
    if (next[spk.label] != spk.utterances.size())
      return "speaker " + spk.label + " has unassigned utterances";
  return std::nullopt;
}

}  // namespace meval
