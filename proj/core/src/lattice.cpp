#include "lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "meval/errors.hpp"
#include "meval/levenshtein.hpp"

namespace meval::detail {

namespace {

using Cell = std::int32_t;
constexpr Cell kInf = std::numeric_limits<Cell>::max() / 2;

struct Shape {
  std::vector<std::size_t> extent;
  std::vector<std::size_t> stride;
  std::size_t size = 1;
};

// Row-major; the last axis is contiguous.
Shape make_shape(const std::vector<std::size_t>& extent) {
  Shape s;
  s.extent = extent;
  s.stride.resize(extent.size());
  for (std::size_t d = extent.size(); d-- > 0;) {
    s.stride[d] = s.size;
    s.size = saturating_mul(s.size, extent[d]);
  }
  return s;
}

Shape node_shape(const LatticeInput& input) {
  std::vector<std::size_t> ext;
  for (const auto& spk : input.speakers) ext.push_back(spk.size() + 1);
  return make_shape(ext);
}

Shape cell_shape(const LatticeInput& input) {
  std::vector<std::size_t> ext;
  for (const auto& ch : input.channels) ext.push_back(ch.size() + 1);
  return make_shape(ext);
}

struct EditCosts {
  Cell correct, substitution, insertion, deletion;
};

class AxisKernel {
 public:
  explicit AxisKernel(const EditCosts& costs) : costs_(costs) {}

  // For every fibre along `axis`: dst[h'] = min(dst[h'], min_h src[h] + lev(utt, hyp[h:h'])).
  void relax(const Cell* src, Cell* dst, const Shape& shape, std::size_t axis, const Symbols& utt,
             const Symbols& hyp) {
    const std::size_t len = shape.extent[axis];
    const std::size_t inner = shape.stride[axis];
    const std::size_t block = len * inner;
    const std::size_t outer = shape.size / block;
    prev_.resize(block);
    cur_.resize(block);
    const Cell ins = costs_.insertion;
    const Cell del = costs_.deletion;
    for (std::size_t o = 0; o < outer; ++o) {
      const Cell* s = src + o * block;
      Cell* d = dst + o * block;
      Cell* prev = prev_.data();
      Cell* cur = cur_.data();
      std::copy(s, s + block, prev);
      for (std::size_t h = 1; h < len; ++h) {
        const Cell* before = prev + (h - 1) * inner;
        Cell* here = prev + h * inner;
        for (std::size_t i = 0; i < inner; ++i) here[i] = std::min(here[i], before[i] + ins);
      }
      for (const Symbol word : utt) {
        for (std::size_t i = 0; i < inner; ++i) cur[i] = prev[i] + del;
        for (std::size_t h = 1; h < len; ++h) {
          const Cell step = word == hyp[h - 1] ? costs_.correct : costs_.substitution;
          const Cell* diag = prev + (h - 1) * inner;
          const Cell* up = prev + h * inner;
          const Cell* left = cur + (h - 1) * inner;
          Cell* here = cur + h * inner;
          for (std::size_t i = 0; i < inner; ++i)
            here[i] = std::min(std::min(diag[i] + step, up[i] + del), left[i] + ins);
        }
        std::swap(prev, cur);
      }
      for (std::size_t j = 0; j < block; ++j) d[j] = std::min(d[j], prev[j]);
    }
  }

 private:
  EditCosts costs_;
  std::vector<Cell> prev_;
  std::vector<Cell> cur_;
};

// lev(utt, hyp[s:end]) for s = 0..end, via the reversed strings.
std::vector<Cost> suffix_distances(const Symbols& utt, const Symbols& hyp, std::size_t end,
                                   const CostConfig& costs) {
  std::vector<Cost> row(end + 1);
  for (std::size_t j = 0; j <= end; ++j) row[j] = static_cast<Cost>(j) * costs.insertion;
  for (auto it = utt.rbegin(); it != utt.rend(); ++it) {
    Cost diag = row[0];
    row[0] += costs.deletion;
    for (std::size_t j = 1; j <= end; ++j) {
      const Cost up = row[j];
      const Cost step = *it == hyp[end - j] ? costs.correct : costs.substitution;
      row[j] = std::min({diag + step, up + costs.deletion, row[j - 1] + costs.insertion});
      diag = up;
    }
  }
  std::vector<Cost> by_start(end + 1);
  for (std::size_t j = 0; j <= end; ++j) by_start[end - j] = row[j];
  return by_start;
}

}  // namespace

std::size_t lattice_bytes(const LatticeInput& input) {
  return saturating_mul(saturating_mul(node_shape(input).size, cell_shape(input).size),
                        sizeof(Cell));
}

LatticeSolution solve_lattice(const LatticeInput& input, const CostConfig& costs,
                              std::size_t memory_limit) {
  costs.validate();
  if (input.channels.empty()) throw std::invalid_argument("lattice needs at least one channel");

  const Shape nodes = node_shape(input);
  const Shape cells = cell_shape(input);
  const std::size_t bytes = lattice_bytes(input);
  if (bytes > memory_limit) throw BudgetExceeded("instance too large for the MIMO lattice", bytes, memory_limit);

  std::size_t words = 0;
  for (const auto& spk : input.speakers)
    for (const auto& utt : spk) words += utt.size();
  for (const auto& ch : input.channels) words += ch.size();
  if (costs.max_cost() > 0 &&
      static_cast<std::uint64_t>(costs.max_cost()) * (words + 1) >= static_cast<std::uint64_t>(kInf))
    throw std::overflow_error("edit costs too large for the lattice cell type");

  const EditCosts cell_costs{static_cast<Cell>(costs.correct), static_cast<Cell>(costs.substitution),
                             static_cast<Cell>(costs.insertion), static_cast<Cell>(costs.deletion)};
  const std::size_t num_speakers = input.speakers.size();
  const std::size_t num_channels = input.channels.size();
  const std::size_t M = cells.size;

  std::vector<Cell> lattice(nodes.size * M);

  // Empty progress: every consumed hypothesis word is an insertion.
  {
    std::vector<std::size_t> h(num_channels, 0);
    for (std::size_t flat = 0; flat < M; ++flat) {
      std::size_t total = 0;
      for (auto v : h) total += v;
      lattice[flat] = static_cast<Cell>(total) * cell_costs.insertion;
      for (std::size_t c = num_channels; c-- > 0;) {
        if (++h[c] < cells.extent[c]) break;
        h[c] = 0;
      }
    }
  }

  AxisKernel kernel(cell_costs);
  std::vector<std::size_t> g(num_speakers, 0);
  for (std::size_t node = 1; node < nodes.size; ++node) {
    for (std::size_t k = num_speakers; k-- > 0;) {
      if (++g[k] < nodes.extent[k]) break;
      g[k] = 0;
    }
    Cell* dst = lattice.data() + node * M;
    std::fill(dst, dst + M, kInf);
    for (std::size_t k = 0; k < num_speakers; ++k) {
      if (g[k] == 0) continue;
      const Cell* src = lattice.data() + (node - nodes.stride[k]) * M;
      const Symbols& utt = input.speakers[k][g[k] - 1];
      for (std::size_t b = 0; b < num_channels; ++b)
        kernel.relax(src, dst, cells, b, utt, input.channels[b]);
    }
  }

  LatticeSolution solution;
  std::size_t node = nodes.size - 1;
  std::size_t cell = M - 1;
  for (std::size_t k = 0; k < num_speakers; ++k) g[k] = nodes.extent[k] - 1;
  std::vector<std::size_t> h(num_channels);
  for (std::size_t c = 0; c < num_channels; ++c) h[c] = cells.extent[c] - 1;
  Cost target = lattice[node * M + cell];
  solution.cost = target;

  // Backtrack one utterance at a time. Candidates are tried by channel, then
  // speaker, then latest start position.
  while (node != 0) {
    bool found = false;
    for (std::size_t b = 0; b < num_channels && !found; ++b) {
      for (std::size_t k = 0; k < num_speakers && !found; ++k) {
        if (g[k] == 0) continue;
        const std::size_t pred = node - nodes.stride[k];
        const Symbols& utt = input.speakers[k][g[k] - 1];
        const auto tail = suffix_distances(utt, input.channels[b], h[b], costs);
        const std::size_t base = cell - h[b] * cells.stride[b];
        for (std::size_t s = h[b] + 1; s-- > 0;) {
          const std::size_t from = base + s * cells.stride[b];
          const Cost before = lattice[pred * M + from];
          if (before + tail[s] != target) continue;
          solution.decisions.push_back({k, g[k] - 1, b});
          --g[k];
          node = pred;
          cell = from;
          h[b] = s;
          target = before;
          found = true;
          break;
        }
      }
    }
    if (!found) throw std::logic_error("lattice backtracking found no predecessor");
  }
  std::reverse(solution.decisions.begin(), solution.decisions.end());
  return solution;
}

}  // namespace meval::detail
