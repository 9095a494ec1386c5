#include <algorithm>
#include <functional>
#include <limits>

#include "doctest.h"
#include "meval/errors.hpp"
#include "meval/levenshtein.hpp"
#include "support.hpp"

using namespace meval;

namespace {

// Minimum cost over every alignment, by plain recursion.
Cost enumerate_alignments(const Words& r, const Words& h, std::size_t i, std::size_t j,
                          const CostConfig& c) {
  if (i == r.size()) return static_cast<Cost>(h.size() - j) * c.insertion;
  if (j == h.size()) return static_cast<Cost>(r.size() - i) * c.deletion;
  const Cost diag = (r[i] == h[j] ? c.correct : c.substitution) + enumerate_alignments(r, h, i + 1, j + 1, c);
  const Cost del = c.deletion + enumerate_alignments(r, h, i + 1, j, c);
  const Cost ins = c.insertion + enumerate_alignments(r, h, i, j + 1, c);
  return std::min({diag, del, ins});
}

// Every order-preserving merge of `parts`.
void interleavings(const std::vector<Words>& parts, const std::function<void(const Words&)>& visit) {
  std::vector<std::size_t> pos(parts.size(), 0);
  Words current;
  std::function<void()> rec = [&] {
    bool any = false;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (pos[k] == parts[k].size()) continue;
      any = true;
      current.push_back(parts[k][pos[k]++]);
      rec();
      --pos[k];
      current.pop_back();
    }
    if (!any) visit(current);
  };
  rec();
}

Cost multidim_by_interleaving(const std::vector<Words>& refs, const std::vector<Words>& hyps) {
  Cost best = std::numeric_limits<Cost>::max();
  interleavings(refs, [&](const Words& r) {
    interleavings(hyps, [&](const Words& h) { best = std::min(best, distance(r, h)); });
  });
  return best;
}

Words apply(const Words& ref, const Words& hyp, const Alignment& alignment) {
  Words out;
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::correct: out.push_back(ref[*op.ref_position - 1]); break;
      case EditKind::substitute:
      case EditKind::insert: out.push_back(hyp[*op.hyp_position - 1]); break;
      case EditKind::remove: break;
    }
  }
  return out;
}

Cost op_cost(const EditOp& op, const CostConfig& c) {
  switch (op.kind) {
    case EditKind::correct: return c.correct;
    case EditKind::substitute: return c.substitution;
    case EditKind::insert: return c.insertion;
    case EditKind::remove: return c.deletion;
  }
  return 0;
}

}  // namespace

TEST_CASE("distance examples") {
  CHECK(distance(Words{"a", "b", "c", "d"}, Words{"a", "f", "c", "h"}) == 2);
  CHECK(distance(Words{"a", "b"}, Words{"a", "b"}) == 0);
  CHECK(distance(Words{"a", "b", "c", "d", "e"}, Words{"c", "a", "b", "d", "e"}) == 2);
  CHECK(distance(Words{}, Words{"x", "y"}) == 2);
  CHECK(distance(Words{"x"}, Words{}) == 1);
  CHECK(distance(Words{}, Words{}) == 0);
}

TEST_CASE("full matrix matches the recursive definition") {
  const Words r{"a", "b", "c", "d", "e"};
  const Words h{"c", "a", "b", "d", "e"};
  Vocabulary vocab;
  const auto rs = vocab.intern(r);
  const auto hs = vocab.intern(h);
  const auto m = distance_matrix(rs, hs);
  REQUIRE(m.size() == 36);
  CHECK(m.back() == 2);
  for (std::size_t i = 0; i <= 5; ++i) {
    CHECK(m[i * 6] == static_cast<Cost>(i));
    CHECK(m[i] == static_cast<Cost>(i));
  }
  // Every entry agrees with the plain recursion on prefixes.
  for (std::size_t i = 0; i <= 5; ++i)
    for (std::size_t j = 0; j <= 5; ++j) {
      const Words rp(r.begin(), r.begin() + i), hp(h.begin(), h.begin() + j);
      CHECK(m[i * 6 + j] == enumerate_alignments(rp, hp, 0, 0, {}));
    }
}

TEST_CASE("distance_with_counts examples") {
  auto res = distance_with_counts(Words{"a", "b"}, Words{"a", "b", "e", "f"});
  CHECK(res.cost == 2);
  CHECK(res.counts == ErrorCounts{0, 2, 0, 2, 2});

  res = distance_with_counts(Words{"e", "f"}, Words{});
  CHECK(res.cost == 2);
  CHECK(res.counts == ErrorCounts{0, 0, 2, 0, 2});

  res = distance_with_counts(Words{"c", "d", "e"}, Words{"c", "a", "b", "d", "e"});
  CHECK(res.cost == 2);
  CHECK(res.counts == ErrorCounts{0, 2, 0, 3, 3});
}

TEST_CASE("backtracking prefers the diagonal, then deletion") {
  auto res = distance_with_counts(Words{"a"}, Words{"b"});
  REQUIRE(res.alignment.ops.size() == 1);
  CHECK(res.alignment.ops[0].kind == EditKind::substitute);

  // With substitution as expensive as del + ins, the diagonal still wins.
  res = distance_with_counts(Words{"a"}, Words{"b"}, CostConfig{0, 2, 1, 1});
  CHECK(res.cost == 2);
  REQUIRE(res.alignment.ops.size() == 1);
  CHECK(res.alignment.ops[0].kind == EditKind::substitute);

  // Either 'a' may be deleted; walking back from the end the diagonal is
  // taken first, so the final 'a' is the matched one.
  res = distance_with_counts(Words{"a", "a"}, Words{"a"});
  REQUIRE(res.alignment.ops.size() == 2);
  CHECK(res.alignment.ops[0] == EditOp{EditKind::remove, 1, std::nullopt});
  CHECK(res.alignment.ops[1] == EditOp{EditKind::correct, 2, 1});
}

TEST_CASE("random strings agree with exhaustive alignment enumeration") {
  testing::Gen gen(11);
  const CostConfig weighted{0, 3, 2, 2};
  for (int i = 0; i < 300; ++i) {
    const auto r = gen.words(5, 3);
    const auto h = gen.words(5, 3);
    CHECK(distance(r, h) == enumerate_alignments(r, h, 0, 0, {}));
    CHECK(distance(r, h, weighted) == enumerate_alignments(r, h, 0, 0, weighted));
  }
}

TEST_CASE("alignment invariants and replay") {
  testing::Gen gen(12);
  for (const CostConfig costs : {CostConfig{}, CostConfig{0, 2, 1, 1}, CostConfig{1, 4, 3, 2}}) {
    for (int i = 0; i < 200; ++i) {
      const auto r = gen.words(10, 3);
      const auto h = gen.words(10, 3);
      const auto res = distance_with_counts(r, h, costs);
      CHECK(res.cost == distance(r, h, costs));
      CHECK(apply(r, h, res.alignment) == h);
      CHECK(tally(res.alignment) == res.counts);

      std::size_t next_r = 1, next_h = 1;
      Cost total = 0;
      for (const auto& op : res.alignment.ops) {
        total += op_cost(op, costs);
        if (op.kind != EditKind::insert) CHECK(*op.ref_position == next_r++);
        if (op.kind != EditKind::remove) CHECK(*op.hyp_position == next_h++);
      }
      CHECK(next_r == r.size() + 1);
      CHECK(next_h == h.size() + 1);
      CHECK(total == res.cost);

      const auto& c = res.counts;
      CHECK(c.substitutions + c.correct + c.insertions == h.size());
      CHECK(c.substitutions + c.correct + c.deletions == r.size());
      CHECK(c.ref_length == r.size());
    }
  }
}

TEST_CASE("metric axioms and bounds under unit costs") {
  testing::Gen gen(13);
  for (int i = 0; i < 300; ++i) {
    const auto x = gen.words(12, 3);
    const auto y = gen.words(12, 3);
    const auto z = gen.words(12, 3);
    const Cost xy = distance(x, y);
    CHECK(distance(x, x) == 0);
    CHECK(xy == distance(y, x));
    CHECK(distance(x, z) <= xy + distance(y, z));
    const auto n = static_cast<Cost>(x.size()), m = static_cast<Cost>(y.size());
    CHECK(xy >= std::abs(n - m));
    CHECK(xy <= std::max(n, m));
  }
}

TEST_CASE("adjacent matrix cells differ by at most the largest cost") {
  testing::Gen gen(14);
  const CostConfig costs{0, 3, 1, 2};
  for (int i = 0; i < 50; ++i) {
    Vocabulary vocab;
    const auto r = vocab.intern(gen.words(8, 3));
    const auto h = vocab.intern(gen.words(8, 3));
    const auto m = distance_matrix(r, h, costs);
    const std::size_t w = h.size() + 1;
    for (std::size_t a = 0; a <= r.size(); ++a)
      for (std::size_t b = 0; b <= h.size(); ++b) {
        if (a > 0) CHECK(std::abs(m[a * w + b] - m[(a - 1) * w + b]) <= costs.max_cost());
        if (b > 0) CHECK(std::abs(m[a * w + b] - m[a * w + b - 1]) <= costs.max_cost());
      }
  }
}

TEST_CASE("multidim_distance examples") {
  CHECK(multidim_distance({{"a", "b"}}, {{"a", "b"}}) == 0);
  CHECK(multidim_distance({{"a", "b", "c", "d"}, {"e", "f", "g", "h"}},
                          {{"a", "f", "c", "h"}, {"e", "b", "g", "d"}}) == 0);
  CHECK(multidim_distance({{"a", "b"}, {"e", "f"}}, {{"a", "e", "b", "f"}}) == 0);
  CHECK(multidim_distance({{"a"}, {"b"}}, {{}, {}}) == 2);
  CHECK(multidim_distance({{}}, {{"x"}, {"y"}}) == 2);
}

TEST_CASE("multidim_distance with one reference and one hypothesis equals distance") {
  testing::Gen gen(15);
  for (int i = 0; i < 200; ++i) {
    const auto r = gen.words(8, 3);
    const auto h = gen.words(8, 3);
    CHECK(multidim_distance({r}, {h}) == distance(r, h));
  }
}

TEST_CASE("multidim_distance equals the best pair of interleavings") {
  testing::Gen gen(16);
  for (int i = 0; i < 150; ++i) {
    std::vector<Words> refs(gen.between(1, 3)), hyps(gen.between(1, 2));
    for (auto& r : refs) r = gen.words(3, 3);
    for (auto& h : hyps) h = gen.words(3, 3);
    CHECK(multidim_distance(refs, hyps) == multidim_by_interleaving(refs, hyps));
  }
}

TEST_CASE("multidim_distance is invariant under reordering of either side") {
  testing::Gen gen(17);
  for (int i = 0; i < 100; ++i) {
    std::vector<Words> refs(gen.between(1, 3)), hyps(gen.between(1, 3));
    for (auto& r : refs) r = gen.words(4, 3);
    for (auto& h : hyps) h = gen.words(4, 3);
    const Cost base = multidim_distance(refs, hyps);
    auto r2 = refs, h2 = hyps;
    std::shuffle(r2.begin(), r2.end(), gen.engine());
    std::shuffle(h2.begin(), h2.end(), gen.engine());
    CHECK(multidim_distance(r2, hyps) == base);
    CHECK(multidim_distance(refs, h2) == base);
    CHECK(multidim_distance(r2, h2) == base);
  }
}

TEST_CASE("multidim_distance enforces the state limit") {
  const std::vector<Words> refs{{"a", "b", "c"}, {"d", "e"}};
  const std::vector<Words> hyps{{"a", "b"}};
  // 4 * 3 * 3 = 36 states.
  CHECK(multidim_distance(refs, hyps, {}, 36) >= 0);
  CHECK_THROWS_AS(multidim_distance(refs, hyps, {}, 35), BudgetExceeded);
}

TEST_CASE("saturating_mul") {
  CHECK(detail::saturating_mul(3, 4) == 12);
  CHECK(detail::saturating_mul(0, std::numeric_limits<std::size_t>::max()) == 0);
  CHECK(detail::saturating_mul(std::size_t{1} << 40, std::size_t{1} << 40) ==
        std::numeric_limits<std::size_t>::max());
}
