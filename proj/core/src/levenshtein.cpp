#include "meval/levenshtein.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "meval/errors.hpp"

namespace meval {

namespace detail {

std::size_t saturating_mul(std::size_t a, std::size_t b) noexcept {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace detail

namespace {

std::pair<Symbols, Symbols> intern_pair(const Words& ref, const Words& hyp) {
  Vocabulary vocab;
  auto r = vocab.intern(ref);
  auto h = vocab.intern(hyp);
  return {std::move(r), std::move(h)};
}

}  // namespace

Cost distance(std::span<const Symbol> ref, std::span<const Symbol> hyp, const CostConfig& costs) {
  // Rolling over the hypothesis axis keeps one row of |hyp|+1 cells.
  std::vector<Cost> row(hyp.size() + 1);
  for (std::size_t h = 0; h <= hyp.size(); ++h) row[h] = static_cast<Cost>(h) * costs.insertion;
  for (std::size_t r = 1; r <= ref.size(); ++r) {
    Cost diag = row[0];
    row[0] += costs.deletion;
    const Symbol word = ref[r - 1];
    for (std::size_t h = 1; h <= hyp.size(); ++h) {
      const Cost up = row[h];
      const Cost match = diag + (word == hyp[h - 1] ? costs.correct : costs.substitution);
      row[h] = std::min({match, up + costs.deletion, row[h - 1] + costs.insertion});
      diag = up;
    }
  }
  return row[hyp.size()];
}

Cost distance(const Words& ref, const Words& hyp, const CostConfig& costs) {
  auto [r, h] = intern_pair(ref, hyp);
  return distance(r, h, costs);
}

std::vector<Cost> distance_matrix(std::span<const Symbol> ref, std::span<const Symbol> hyp,
                                  const CostConfig& costs) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<Cost> lev((n + 1) * width);
  for (std::size_t h = 0; h <= m; ++h) lev[h] = static_cast<Cost>(h) * costs.insertion;
  for (std::size_t r = 1; r <= n; ++r) {
    lev[r * width] = static_cast<Cost>(r) * costs.deletion;
    for (std::size_t h = 1; h <= m; ++h) {
      const Cost match = lev[(r - 1) * width + h - 1] +
                         (ref[r - 1] == hyp[h - 1] ? costs.correct : costs.substitution);
      lev[r * width + h] = std::min({match, lev[(r - 1) * width + h] + costs.deletion,
                                     lev[r * width + h - 1] + costs.insertion});
    }
  }
  return lev;
}

EditResult distance_with_counts(std::span<const Symbol> ref, std::span<const Symbol> hyp,
                                const CostConfig& costs) {
  const auto lev = distance_matrix(ref, hyp, costs);
  const std::size_t width = hyp.size() + 1;
  auto at = [&](std::size_t r, std::size_t h) { return lev[r * width + h]; };

  EditResult result;
  result.cost = at(ref.size(), hyp.size());
  std::size_t r = ref.size();
  std::size_t h = hyp.size();
  auto& ops = result.alignment.ops;
  while (r > 0 || h > 0) {
    const Cost here = at(r, h);
    if (r > 0 && h > 0) {
      const bool same = ref[r - 1] == hyp[h - 1];
      if (here == at(r - 1, h - 1) + (same ? costs.correct : costs.substitution)) {
        ops.push_back({same ? EditKind::correct : EditKind::substitute, r, h});
        --r;
        --h;
        continue;
      }
    }
    if (r > 0 && here == at(r - 1, h) + costs.deletion) {
      ops.push_back({EditKind::remove, r, std::nullopt});
      --r;
      continue;
    }
    if (h > 0 && here == at(r, h - 1) + costs.insertion) {
      ops.push_back({EditKind::insert, std::nullopt, h});
      --h;
      continue;
    }
    throw std::logic_error("levenshtein backtracking found no predecessor");
  }
  std::reverse(ops.begin(), ops.end());
  result.counts = tally(result.alignment);
  return result;
}

EditResult distance_with_counts(const Words& ref, const Words& hyp, const CostConfig& costs) {
  auto [r, h] = intern_pair(ref, hyp);
  return distance_with_counts(r, h, costs);
}

ErrorCounts tally(const Alignment& alignment) {
  ErrorCounts c;
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::correct: ++c.correct; break;
      case EditKind::substitute: ++c.substitutions; break;
      case EditKind::insert: ++c.insertions; break;
      case EditKind::remove: ++c.deletions; break;
    }
  }
  c.ref_length = c.correct + c.substitutions + c.deletions;
  return c;
}

Cost multidim_distance(const std::vector<Words>& refs, const std::vector<Words>& hyps,
                       const CostConfig& costs, std::size_t state_limit) {
  if (refs.empty() || hyps.empty())
    throw std::invalid_argument("multidim_distance needs at least one reference and one hypothesis");
  Vocabulary vocab;
  std::vector<Symbols> seqs;  // references first, then hypotheses
  for (const auto& r : refs) seqs.push_back(vocab.intern(r));
  for (const auto& h : hyps) seqs.push_back(vocab.intern(h));
  const std::size_t num_refs = refs.size();
  const std::size_t dims = seqs.size();

  // Row-major strides; the last hypothesis axis is contiguous.
  std::vector<std::size_t> extent(dims), stride(dims);
  std::size_t states = 1;
  for (std::size_t d = dims; d-- > 0;) {
    extent[d] = seqs[d].size() + 1;
    stride[d] = states;
    states = detail::saturating_mul(states, extent[d]);
  }
  if (states > state_limit)
    throw BudgetExceeded("multi-dimensional distance tensor too large", states, state_limit);

  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> lev(states, kInf);
  lev[0] = 0;
  std::vector<std::size_t> idx(dims, 0);
  for (std::size_t flat = 1; flat < states; ++flat) {
    // Advance the odometer to match `flat`.
    for (std::size_t d = dims; d-- > 0;) {
      if (++idx[d] < extent[d]) break;
      idx[d] = 0;
    }
    Cost best = kInf;
    for (std::size_t a = 0; a < num_refs; ++a) {
      if (idx[a] == 0) continue;
      const std::size_t from_r = flat - stride[a];
      best = std::min(best, lev[from_r] + costs.deletion);
      const Symbol word = seqs[a][idx[a] - 1];
      for (std::size_t b = num_refs; b < dims; ++b) {
        if (idx[b] == 0) continue;
        const Cost step = word == seqs[b][idx[b] - 1] ? costs.correct : costs.substitution;
        best = std::min(best, lev[from_r - stride[b]] + step);
      }
    }
    for (std::size_t b = num_refs; b < dims; ++b) {
      if (idx[b] == 0) continue;
      best = std::min(best, lev[flat - stride[b]] + costs.insertion);
    }
    lev[flat] = best;
  }
  return lev[states - 1];
}

}  // namespace meval
