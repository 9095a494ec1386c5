#include "meval/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "meval/errors.hpp"
#include "meval/levenshtein.hpp"

namespace meval::oracle {

namespace {

struct Unit {
  std::size_t speaker;
  std::size_t utterance;
  Symbols words;
};

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out = detail::saturating_mul(out, base);
  return out;
}

std::size_t multinomial(const std::vector<std::size_t>& parts) {
  // Product of binomials built one factor at a time; count * total / i is
  // always integral, so divide out gcd(count, i) first to stay exact.
  std::size_t count = 1;
  std::size_t total = 0;
  for (const auto n : parts) {
    for (std::size_t i = 1; i <= n; ++i) {
      ++total;
      const std::size_t g = std::gcd(count, i);
      count = detail::saturating_mul(count / g, total / (i / g));
      if (count == std::numeric_limits<std::size_t>::max()) return count;
    }
  }
  return count;
}

void check_limit(std::size_t required, std::size_t limit) {
  if (required > limit) throw BudgetExceeded("enumeration limit exceeded", required, limit);
}

// Scores every C^|units| channel assignment of `units` taken in the given order.
struct AssignmentSearch {
  const std::vector<Symbols>& channels;
  const CostConfig& costs;

  // Returns the best cost and writes the winning channel per unit; `best`
  // is only replaced on strict improvement.
  void run(const std::vector<const Unit*>& units, Cost& best, std::vector<std::size_t>& best_digits,
           bool& have_best) const {
    const std::size_t C = channels.size();
    std::vector<std::size_t> digits(units.size(), 0);
    std::vector<Symbols> concat(C);
    while (true) {
      for (auto& c : concat) c.clear();
      for (std::size_t i = 0; i < units.size(); ++i) {
        auto& dst = concat[digits[i]];
        dst.insert(dst.end(), units[i]->words.begin(), units[i]->words.end());
      }
      Cost total = 0;
      for (std::size_t c = 0; c < C; ++c) total += distance(concat[c], channels[c], costs);
      if (!have_best || total < best) {
        best = total;
        best_digits = digits;
        have_best = true;
      }
      std::size_t pos = units.size();
      while (pos > 0) {
        --pos;
        if (++digits[pos] < C) break;
        digits[pos] = 0;
        if (pos == 0) return;
      }
      if (units.empty()) return;
    }
  }
};

struct Prepared {
  std::vector<std::vector<Unit>> speakers;
  std::vector<Symbols> channels;
};

Prepared prepare(const ReferenceSet& refs, const HypothesisSet& hyps) {
  if (hyps.empty()) throw std::invalid_argument("at least one hypothesis channel is required");
  Vocabulary vocab;
  Prepared p;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    auto& units = p.speakers.emplace_back();
    const auto& utts = refs.speakers()[k].utterances;
    for (std::size_t u = 0; u < utts.size(); ++u) units.push_back({k, u, vocab.intern(utts[u].words)});
  }
  for (const auto& ch : hyps.channels()) p.channels.push_back(vocab.intern(ch.words));
  return p;
}

MatchResult to_result(const ReferenceSet& refs, const HypothesisSet& hyps,
                      const std::vector<const Unit*>& units, const std::vector<std::size_t>& digits,
                      Cost cost) {
  MatchResult result{cost, {}};
  for (std::size_t i = 0; i < units.size(); ++i)
    result.assignment.decisions.push_back({refs.speakers()[units[i]->speaker].label,
                                           units[i]->utterance, hyps.channels()[digits[i]].label});
  return result;
}

}  // namespace

MatchResult brute_force_orc(const ReferenceSet& refs, const HypothesisSet& hyps,
                            const CostConfig& costs, std::size_t limit) {
  costs.validate();
  const Prepared p = prepare(refs, hyps);
  std::vector<const Unit*> order;
  for (const auto& spk : p.speakers)
    for (const auto& unit : spk) order.push_back(&unit);
  if (refs.size() > 1) {
    for (const auto* unit : order) {
      const auto& utt = refs.speakers()[unit->speaker].utterances[unit->utterance];
      if (!utt.begin_time)
        throw MissingBeginTime("missing begin time for speaker " +
                               refs.speakers()[unit->speaker].label + " (source index " +
                               std::to_string(utt.source_index) + ")");
    }
    auto utt_of = [&](const Unit* u) -> const Utterance& {
      return refs.speakers()[u->speaker].utterances[u->utterance];
    };
    std::stable_sort(order.begin(), order.end(), [&](const Unit* a, const Unit* b) {
      const auto& ua = utt_of(a);
      const auto& ub = utt_of(b);
      if (*ua.begin_time != *ub.begin_time) return *ua.begin_time < *ub.begin_time;
      return ua.source_index < ub.source_index;
    });
  }
  check_limit(saturating_pow(p.channels.size(), order.size()), limit);

  Cost best = 0;
  std::vector<std::size_t> digits;
  bool have = false;
  AssignmentSearch{p.channels, costs}.run(order, best, digits, have);
  return to_result(refs, hyps, order, digits, best);
}

MatchResult brute_force_mimo(const ReferenceSet& refs, const HypothesisSet& hyps,
                             const CostConfig& costs, std::size_t limit) {
  costs.validate();
  const Prepared p = prepare(refs, hyps);
  std::vector<std::size_t> counts;
  std::vector<std::size_t> interleaving;  // speaker id per consumed utterance
  for (std::size_t k = 0; k < p.speakers.size(); ++k) {
    counts.push_back(p.speakers[k].size());
    interleaving.insert(interleaving.end(), p.speakers[k].size(), k);
  }
  check_limit(detail::saturating_mul(multinomial(counts),
                                     saturating_pow(p.channels.size(), interleaving.size())),
              limit);

  Cost best = 0;
  bool have = false;
  std::vector<const Unit*> best_units;
  std::vector<std::size_t> best_digits;
  do {
    std::vector<const Unit*> units;
    std::vector<std::size_t> next(p.speakers.size(), 0);
    for (const auto k : interleaving) units.push_back(&p.speakers[k][next[k]++]);
    const Cost before = best;
    const bool had = have;
    std::vector<std::size_t> digits;
    AssignmentSearch{p.channels, costs}.run(units, best, digits, have);
    if (!had || best < before) {
      best_units = units;
      best_digits = digits;
    }
  } while (std::next_permutation(interleaving.begin(), interleaving.end()));
  return to_result(refs, hyps, best_units, best_digits, best);
}

PermutationResult brute_force_cp(const ReferenceSet& refs, const HypothesisSet& hyps,
                                 const CostConfig& costs, std::size_t limit) {
  costs.validate();
  const std::size_t n = std::max(refs.size(), hyps.size());
  std::size_t perms = 1;
  for (std::size_t i = 2; i <= n; ++i) perms = detail::saturating_mul(perms, i);
  check_limit(perms, limit);

  Vocabulary vocab;
  std::vector<Symbols> rows(n), cols(n);
  for (std::size_t i = 0; i < refs.size(); ++i) rows[i] = vocab.intern(refs.speakers()[i].concatenated());
  for (std::size_t j = 0; j < hyps.size(); ++j) cols[j] = vocab.intern(hyps.channels()[j].words);

  PermutationResult best;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  bool have = false;
  do {
    Cost total = 0;
    for (std::size_t i = 0; i < n; ++i) total += distance(rows[i], cols[perm[i]], costs);
    if (!have || total < best.cost) {
      best = {total, perm};
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace meval::oracle
