// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "meval/errors.hpp"
#include "meval/levenshtein.hpp"
#include "meval/matchers.hpp"
#include "meval/oracle.hpp"
#include "meval/scenario.hpp"
#include "support.hpp"

using namespace meval;
using namespace meval::testing;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  std::string detail;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Golden {
  ReferenceSet refs;
  HypothesisSet hyps;
  const char* mimo;
  const char* orc;
  const char* cp;
};

Check golden(const Golden& g, const std::function<void(Check&)>& extra = {}) {
  Check c;
  const auto start = Clock::now();
  const auto mimo = mimo_wer(g.refs, g.hyps).rate.fraction();
  const auto orc = orc_wer(g.refs, g.hyps).rate.fraction();
  const auto cp = cp_wer(g.refs, g.hyps).rate.fraction();
  if (extra) extra(c);
  const double t = seconds_since(start);
  c.expect(mimo == g.mimo, "MIMO " + mimo + ", expected " + g.mimo);
  c.expect(orc == g.orc, "ORC " + orc + ", expected " + g.orc);
  c.expect(cp == g.cp, "cpWER " + cp + ", expected " + g.cp);
  c.expect(t < 1.0, fmt("took %.3f s", t));
  if (c.ok) c.detail = "MIMO " + mimo + ", ORC " + orc + ", cpWER " + cp + fmt(", %.4f s", t);
  return c;
}

struct Instance {
  ReferenceSet refs;
  HypothesisSet hyps;
};

// K <= 3, C <= 2, U <= 6 utterances in total, W <= 4 words, alphabet of 3.
std::vector<Instance> random_instances(std::size_t n) {
  Gen gen(2024);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto refs = gen.refs(3, 6, 4, 3, 0);
    auto hyps = gen.hyps(2, 12, 3);
    out.push_back({std::move(refs), std::move(hyps)});
  }
  return out;
}

Check oracle_equivalence(const std::vector<Instance>& instances) {
  Check c;
  const auto start = Clock::now();
  std::size_t i = 0;
  for (const auto& [refs, hyps] : instances) {
    const auto tag = " on instance " + std::to_string(i++);
    c.expect(mimo_distance(refs, hyps).cost == oracle::brute_force_mimo(refs, hyps).cost, "MIMO differs" + tag);
    c.expect(orc_distance(refs, hyps).cost == oracle::brute_force_orc(refs, hyps).cost, "ORC differs" + tag);
    c.expect(static_cast<Cost>(cp_wer(refs, hyps).counts.errors()) == oracle::brute_force_cp(refs, hyps).cost,
             "cpWER differs" + tag);
  }
  const double t = seconds_since(start);
  c.expect(t < 300.0, fmt("took %.1f s", t));
  if (c.ok) c.detail = std::to_string(instances.size()) + " instances" + fmt(", %.2f s", t);
  return c;
}

Check bound_chain(const std::vector<Instance>& instances) {
  Check c;
  std::size_t i = 0;
  for (const auto& [refs, hyps] : instances) {
    const auto m = mimo_wer(refs, hyps).counts.errors();
    const auto o = orc_wer(refs, hyps).counts.errors();
    const auto p = cp_wer(refs, hyps).counts.errors();
    c.expect(m <= o && o <= p, "violated on instance " + std::to_string(i) + ": " + std::to_string(m) + ", " +
                                   std::to_string(o) + ", " + std::to_string(p));
    ++i;
  }
  if (c.ok) c.detail = std::to_string(instances.size()) + " instances";
  return c;
}

Check collapse(std::size_t n) {
  Check c;
  Gen gen(2025);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = gen.between(1, 2);
    std::vector<Speaker> speakers(k);
    std::vector<Words> plain(k);
    std::size_t source = 0;
    for (std::size_t s = 0; s < k; ++s) {
      speakers[s].label = "s" + std::to_string(s);
      const std::size_t utts = gen.between(1, 4);
      for (std::size_t u = 0; u < utts; ++u) {
        const auto w = gen.words(1, 3, 1);
        speakers[s].utterances.push_back({w, std::nullopt, source++});
        plain[s].push_back(w[0]);
      }
    }
    const auto hyps = gen.hyps(2, 6, 3);
    std::vector<Words> hyp_words;
    for (const auto& ch : hyps.channels()) hyp_words.push_back(ch.words);
    const Cost got = mimo_distance(ReferenceSet(std::move(speakers)), hyps).cost;
    const Cost want = multidim_distance(plain, hyp_words);
    c.expect(got == want, "instance " + std::to_string(i) + ": " + std::to_string(got) + " vs " +
                              std::to_string(want));
  }
  if (c.ok) c.detail = std::to_string(n) + " instances";
  return c;
}

Check siso(std::size_t n) {
  Check c;
  Gen gen(2026);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = gen.words(10, 3, 1);
    const auto h = gen.words(10, 3);
    const auto refs = ReferenceSet::from_words({{"s", {r}}});
    const auto hyps = HypothesisSet::from_words({{"h", h}});
    const Cost d = distance(r, h);
    c.expect(mimo_distance(refs, hyps).cost == d, "MIMO differs on pair " + std::to_string(i));
    c.expect(orc_distance(refs, hyps).cost == d, "ORC differs on pair " + std::to_string(i));
    c.expect(static_cast<Cost>(cp_wer(refs, hyps).counts.errors()) == d, "cpWER differs on pair " + std::to_string(i));
  }
  if (c.ok) c.detail = std::to_string(n) + " pairs";
  return c;
}

double median_seconds(const std::function<void()>& fn, int reps) {
  fn();
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    fn();
    t.push_back(seconds_since(start));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Check orc_scaling() {
  Check c;
  std::vector<double> times;
  for (std::size_t u : {10, 20, 40, 80}) {
    const auto s = generate_scenario({4, 2, u, 10, 100, 0, 0.1});
    times.push_back(median_seconds([&] { orc_distance(s.refs, s.hyps); }, 3));
  }
  c.expect(times[3] < 5.0, fmt("U=80 took %.3f s", times[3]));
  std::string ratios;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double ratio = times[i] / std::max(times[i - 1], 1e-9);
    ratios += fmt(i == 1 ? "%.1fx" : "/%.1fx", ratio);
    c.expect(ratio < 20.0, fmt("doubling ratio %.1f", ratio));
  }

  const auto s24 = generate_scenario({4, 2, 24, 10, 100, 0, 0.1});
  std::string brute;
  const auto start = Clock::now();
  try {
    oracle::brute_force_orc(s24.refs, s24.hyps);
    const double t = seconds_since(start);
    c.expect(t > 60.0, fmt("brute force at U=24 finished in %.1f s", t));
    brute = fmt("brute force %.1f s", t);
  } catch (const BudgetExceeded& e) {
    brute = "brute force refused at U=24 (" + std::to_string(e.required()) + " > " + std::to_string(e.limit()) + ")";
  }
  if (c.ok) c.detail = fmt("U=80 in %.3f s, ratios ", times[3]) + ratios + ", " + brute;
  return c;
}

Check mimo_tractability() {
  Check c;
  const auto s = generate_scenario({4, 2, 25, 10, 100, 0, 0.1});
  const auto bytes = mimo_lattice_bytes(s.refs, s.hyps);
  const auto start = Clock::now();
  Cost cost = -1;
  try {
    cost = mimo_distance(s.refs, s.hyps).cost;
  } catch (const BudgetExceeded& e) {
    c.expect(false, e.what());
  }
  const double t = seconds_since(start);
  c.expect(bytes <= kDefaultMemoryLimit, "lattice needs " + std::to_string(bytes) + " bytes");
  c.expect(t < 120.0, fmt("took %.1f s", t));
  if (c.ok)
    c.detail = fmt("%.2f s", t) + fmt(", %.0f MiB lattice", static_cast<double>(bytes) / (1 << 20)) +
               ", cost " + std::to_string(cost);
  return c;
}

Check determinism() {
  Check c;
  std::vector<io::Session> sessions;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto g = generate_scenario({3, 2, 9, 4, 6, seed, 0.3});
    sessions.push_back({"gen" + std::to_string(seed), std::move(g.refs), std::move(g.hyps)});
  }
  sessions.push_back({"example_c", example_c_refs(), example_c_hyps()});
  std::size_t bytes = 0;
  for (const auto metric : {cli::Metric::mimo, cli::Metric::orc, cli::Metric::cp}) {
    const auto first = io::write_report(cli::score_sessions(metric, sessions, {}, 1));
    const auto second = io::write_report(cli::score_sessions(metric, sessions, {}, 4));
    c.expect(first == second, cli::metric_name(metric) + " reports differ");
    c.expect(first.find("\"decisions\":[{") != std::string::npos,
             cli::metric_name(metric) + " report has no assignment");
    bytes += first.size();
  }
  for (const auto metric : {cli::Metric::mimo, cli::Metric::orc, cli::Metric::cp}) {
    cli::ScoreCommand cmd;
    cmd.metric = metric;
    cmd.ref_path = MEVAL_TEST_DATA "/example_b_ref.jsonl";
    cmd.hyp_path = MEVAL_TEST_DATA "/example_b_hyp.jsonl";
    std::ostringstream a, b, err;
    c.expect(cli::cmd_score(cmd, a, err) == cli::kSuccess && cli::cmd_score(cmd, b, err) == cli::kSuccess,
             "score failed: " + err.str());
    c.expect(a.str() == b.str(), cli::metric_name(metric) + " file reports differ");
  }
  if (c.ok) c.detail = std::to_string(bytes) + " report bytes identical across runs";
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Check()>& run) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failures;
    std::printf("%s %2d %s: %s\n", c.ok ? "PASS" : "FAIL", id, title, c.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "example a golden", [] {
    return golden({example_a_refs(), example_a_hyps(), "0/4", "0/4", "4/4"});
  });
  report(2, "example b golden", [] {
    return golden({example_b_refs(), example_b_hyps(), "4/8", "4/8", "4/8"}, [](Check& c) {
      const Cost d = multidim_distance({{"a", "b", "c", "d"}, {"e", "f", "g", "h"}},
                                       {{"a", "f", "c", "h"}, {"e", "b", "g", "d"}});
      c.expect(d == 0, "unconstrained distance " + std::to_string(d) + ", expected 0");
    });
  });
  report(3, "example c golden", [] {
    return golden({example_c_refs(), example_c_hyps(), "2/5", "4/5", "4/5"});
  });

  const auto instances = random_instances(600);
  report(4, "oracle equivalence", [&] { return oracle_equivalence(instances); });
  report(5, "bound chain", [&] { return bound_chain(instances); });
  report(6, "single-word collapse", [] { return collapse(300); });
  report(7, "single stream collapse", [] { return siso(300); });
  report(8, "ORC scaling", orc_scaling);
  report(9, "MIMO tractability", mimo_tractability);
  report(10, "determinism", determinism);
  return failures == 0 ? 0 : 1;
}
