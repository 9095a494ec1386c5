#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "meval/errors.hpp"

namespace meval::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::vector<std::uint64_t> parse_integers(std::string_view text, std::string_view key) {
  std::vector<std::uint64_t> values;
  for (auto item : split(text, ',')) {
    const auto bounds = split(item, ':');
    if (bounds.size() == 1) {
      values.push_back(parse_number<std::uint64_t>(bounds[0], key));
      continue;
    }
    if (bounds.size() > 3) throw std::invalid_argument("invalid range for " + std::string(key));
    const auto lo = parse_number<std::uint64_t>(bounds[0], key);
    const auto hi = parse_number<std::uint64_t>(bounds[1], key);
    const auto step = bounds.size() == 3 ? parse_number<std::uint64_t>(bounds[2], key) : 1;
    if (step == 0 || hi < lo) throw std::invalid_argument("invalid range for " + std::string(key));
    for (auto v = lo; v <= hi; v += step) values.push_back(v);
  }
  return values;
}

std::vector<double> parse_reals(std::string_view text, std::string_view key) {
  std::vector<double> values;
  for (auto item : split(text, ',')) {
    // from_chars for double is locale independent.
    values.push_back(parse_number<double>(item, key));
  }
  return values;
}

std::string format_seconds(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", seconds);
  return buf;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "mimo") return Metric::mimo;
  if (name == "orcwer" || name == "orc") return Metric::orc;
  if (name == "cpwer" || name == "cp") return Metric::cp;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "' (mimo, orcwer, cpwer)");
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::mimo: return "mimo";
    case Metric::orc: return "orcwer";
    case Metric::cp: return "cpwer";
  }
  return {};
}

Method parse_method(std::string_view name) {
  if (name == "dp") return Method::dp;
  if (name == "brute-force") return Method::brute_force;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (dp, brute-force)");
}

std::string method_name(Method method) { return method == Method::dp ? "dp" : "brute-force"; }

CostConfig parse_costs(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw std::invalid_argument("--costs expects correct,sub,ins,del");
  CostConfig costs{parse_number<Cost>(parts[0], "cost"), parse_number<Cost>(parts[1], "cost"),
                   parse_number<Cost>(parts[2], "cost"), parse_number<Cost>(parts[3], "cost")};
  costs.validate();
  return costs;
}

WerResult solve(Metric metric, const ReferenceSet& refs, const HypothesisSet& hyps,
                const SolveOptions& options) {
  const SolverOptions solver{options.memory_limit};
  if (options.method == Method::dp) {
    switch (metric) {
      case Metric::mimo: return mimo_wer(refs, hyps, options.costs, solver);
      case Metric::orc: return orc_wer(refs, hyps, options.costs, solver);
      case Metric::cp: return cp_wer(refs, hyps, options.costs);
    }
  }
  switch (metric) {
    case Metric::mimo: {
      auto m = oracle::brute_force_mimo(refs, hyps, options.costs, options.enumeration_limit);
      const auto counts = assignment_counts(refs, hyps, m.assignment, options.costs);
      return make_result(counts, std::move(m.assignment));
    }
    case Metric::orc: {
      auto m = oracle::brute_force_orc(refs, hyps, options.costs, options.enumeration_limit);
      const auto counts = assignment_counts(refs, hyps, m.assignment, options.costs);
      return make_result(counts, std::move(m.assignment));
    }
    case Metric::cp: {
      const auto p = oracle::brute_force_cp(refs, hyps, options.costs, options.enumeration_limit);
      return cp_result(refs, hyps, p.permutation, options.costs);
    }
  }
  throw std::logic_error("unreachable metric");
}

io::Report score_sessions(Metric metric, const std::vector<io::Session>& sessions,
                          const SolveOptions& options, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, sessions.size())));

  std::vector<std::optional<WerResult>> results(sessions.size());
  std::vector<std::exception_ptr> failures(sessions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sessions.size(); i = next++) {
      try {
        results[i] = solve(metric, sessions[i].refs, sessions[i].hyps, options);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  // Report the first failing session in session order.
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  io::Report report;
  report.metadata.costs = options.costs;
  report.metadata.method = method_name(options.method);
  report.metadata.metrics = {metric_name(metric)};
  for (std::size_t i = 0; i < sessions.size(); ++i)
    report.per_session[sessions[i].id][metric_name(metric)] = std::move(*results[i]);
  return report;
}

int cmd_score(const ScoreCommand& cmd, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    const auto sessions = io::group_sessions(io::read_seglst(cmd.ref_path), io::read_seglst(cmd.hyp_path));
    text = io::write_report(score_sessions(cmd.metric, sessions, cmd.solve, cmd.jobs));
  } catch (const BudgetExceeded& e) {
    err << "meval: " << e.what() << '\n';
    return kBudgetError;
  } catch (const InputError& e) {
    err << "meval: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "meval: " << e.what() << '\n';
    return kInputError;
  }
  if (cmd.out_path) {
    std::ofstream file(*cmd.out_path, std::ios::binary);
    if (!file) {
      err << "meval: cannot write " << *cmd.out_path << '\n';
      return kInputError;
    }
    file << text;
  } else {
    out << text;
  }
  return kSuccess;
}

BenchMethod parse_bench_method(std::string_view name) {
  if (name == "mimo") return BenchMethod::mimo;
  if (name == "orc-dp") return BenchMethod::orc_dp;
  if (name == "orc-brute-force") return BenchMethod::orc_brute_force;
  if (name == "cpwer") return BenchMethod::cpwer;
  throw std::invalid_argument("unknown bench method '" + std::string(name) +
                              "' (mimo, orc-dp, orc-brute-force, cpwer)");
}

std::string bench_method_name(BenchMethod method) {
  switch (method) {
    case BenchMethod::mimo: return "mimo";
    case BenchMethod::orc_dp: return "orc-dp";
    case BenchMethod::orc_brute_force: return "orc-brute-force";
    case BenchMethod::cpwer: return "cpwer";
  }
  return {};
}

std::vector<BenchScenario> parse_grid(std::string_view spec) {
  std::map<std::string, std::string_view> fields;
  for (auto part : split(spec, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("grid entry without '=': " + std::string(part));
    const std::string key(trim(part.substr(0, eq)));
    static const std::vector<std::string> known{"K", "C", "U", "W", "V", "seed", "corruption"};
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown grid key '" + key + "'");
    fields[key] = part.substr(eq + 1);
  }
  const BenchScenario defaults;
  auto ints = [&](const char* key, std::uint64_t fallback) {
    auto it = fields.find(key);
    return it == fields.end() ? std::vector<std::uint64_t>{fallback} : parse_integers(it->second, key);
  };
  const auto ks = ints("K", defaults.num_speakers);
  const auto cs = ints("C", defaults.num_channels);
  const auto us = ints("U", defaults.num_utterances);
  const auto ws = ints("W", defaults.words_per_utterance);
  const auto vs = ints("V", defaults.vocabulary_size);
  const auto seeds = ints("seed", defaults.seed);
  const auto corruptions = fields.count("corruption") ? parse_reals(fields["corruption"], "corruption")
                                                      : std::vector<double>{defaults.corruption};
  std::vector<BenchScenario> grid;
  for (auto k : ks)
    for (auto c : cs)
      for (auto u : us)
        for (auto w : ws)
          for (auto v : vs)
            for (auto seed : seeds)
              for (auto p : corruptions) {
                BenchScenario s{k, c, u, w, v, seed, p};
                s.validate();
                grid.push_back(s);
              }
  return grid;
}

std::optional<double> time_solve(BenchMethod method, const GeneratedSession& session,
                                 const BenchCommand& cmd) {
  const SolverOptions solver{cmd.memory_limit};
  auto once = [&] {
    switch (method) {
      case BenchMethod::mimo: return mimo_distance(session.refs, session.hyps, {}, solver).cost;
      case BenchMethod::orc_dp: return orc_distance(session.refs, session.hyps, {}, solver).cost;
      case BenchMethod::orc_brute_force:
        return oracle::brute_force_orc(session.refs, session.hyps, {}, cmd.enumeration_limit).cost;
      case BenchMethod::cpwer: return static_cast<Cost>(cp_wer(session.refs, session.hyps).counts.errors());
    }
    return Cost{0};
  };
  using Clock = std::chrono::steady_clock;
  try {
    once();  // warm-up
    std::vector<double> samples;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, cmd.repetitions); ++r) {
      const auto start = Clock::now();
      volatile Cost sink = once();
      (void)sink;
      samples.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

void run_bench(const BenchCommand& cmd, const std::function<void(const BenchRow&)>& sink) {
  std::vector<bool> exhausted(cmd.methods.size(), false);
  for (const auto& scenario : cmd.grid) {
    const auto session = generate_scenario(scenario);
    for (std::size_t m = 0; m < cmd.methods.size(); ++m) {
      BenchRow row{cmd.methods[m], scenario, std::nullopt};
      if (!exhausted[m]) {
        row.seconds = time_solve(cmd.methods[m], session, cmd);
        if (row.seconds && *row.seconds > cmd.time_budget) exhausted[m] = true;
      }
      sink(row);
    }
  }
}

void write_bench_header(std::ostream& out) { out << "method,K,C,U,W,seed,seconds\n"; }

void write_bench_row(std::ostream& out, const BenchRow& row) {
  const auto& s = row.scenario;
  out << bench_method_name(row.method) << ',' << s.num_speakers << ',' << s.num_channels << ','
      << s.num_utterances << ',' << s.words_per_utterance << ',' << s.seed << ','
      << (row.seconds ? format_seconds(*row.seconds) : "skipped") << '\n';
}

int cmd_bench(const BenchCommand& cmd, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  if (cmd.out_path) {
    file.open(*cmd.out_path, std::ios::binary);
    if (!file) {
      err << "meval: cannot write " << *cmd.out_path << '\n';
      return kInputError;
    }
  }
  std::ostream& csv = cmd.out_path ? static_cast<std::ostream&>(file) : out;
  csv.imbue(std::locale::classic());
  write_bench_header(csv);
  run_bench(cmd, [&](const BenchRow& row) {
    write_bench_row(csv, row);
    csv.flush();
  });
  return kSuccess;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Word error rates for multi-speaker transcription (MIMO, ORC, cpWER)", "meval"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "Score hypothesis segments against references");
  std::string metric, ref_path, hyp_path, out_path, costs = "0,1,1,1", method = "dp";
  std::size_t memory_limit = kDefaultMemoryLimit;
  std::size_t enumeration_limit = oracle::kDefaultEnumerationLimit;
  unsigned jobs = 0;
  score->add_option("metric", metric, "mimo | orcwer | cpwer")->required();
  score->add_option("--ref", ref_path, "Reference segment list (JSONL)")->required();
  score->add_option("--hyp", hyp_path, "Hypothesis segment list (JSONL)")->required();
  score->add_option("--out", out_path, "Report path (default: stdout)");
  score->add_option("--costs", costs, "correct,sub,ins,del")->capture_default_str();
  score->add_option("--method", method, "dp | brute-force")->capture_default_str();
  score->add_option("--memory-limit", memory_limit, "Lattice memory budget in bytes")->capture_default_str();
  score->add_option("--enumeration-limit", enumeration_limit, "Brute-force enumeration limit")
      ->capture_default_str();
  score->add_option("--jobs", jobs, "Concurrent sessions (0: all processors)")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Runtime benchmark on generated sessions, CSV output");
  std::string grid = "K=4;C=2;U=2:40:2;W=10;corruption=0.1";
  std::string methods = "mimo,orc-dp,orc-brute-force,cpwer";
  std::string bench_out;
  std::size_t reps = 3;
  double time_budget = 60.0;
  std::size_t bench_memory = kDefaultMemoryLimit;
  std::size_t bench_enum = oracle::kDefaultEnumerationLimit;
  bench->add_option("--grid", grid, "Scenario grid, e.g. K=4;C=2;U=2:80:2;W=10")->capture_default_str();
  bench->add_option("--methods", methods, "Comma list of methods")->capture_default_str();
  bench->add_option("--reps", reps, "Timed repetitions per point (median)")->capture_default_str();
  bench->add_option("--out", bench_out, "CSV path (default: stdout)");
  bench->add_option("--time-budget", time_budget, "Skip a method after a point slower than this (s)")
      ->capture_default_str();
  bench->add_option("--memory-limit", bench_memory, "Lattice memory budget in bytes")->capture_default_str();
  bench->add_option("--enumeration-limit", bench_enum, "Brute-force enumeration limit")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (score->parsed()) {
      ScoreCommand cmd;
      cmd.metric = parse_metric(metric);
      cmd.ref_path = ref_path;
      cmd.hyp_path = hyp_path;
      if (!out_path.empty()) cmd.out_path = out_path;
      cmd.solve = {parse_costs(costs), parse_method(method), memory_limit, enumeration_limit};
      cmd.jobs = jobs;
      return cmd_score(cmd, out, err);
    }
    BenchCommand cmd;
    cmd.grid = parse_grid(grid);
    cmd.methods.clear();
    for (auto name : split(methods, ',')) cmd.methods.push_back(parse_bench_method(trim(name)));
    cmd.repetitions = reps;
    cmd.time_budget = time_budget;
    cmd.memory_limit = bench_memory;
    cmd.enumeration_limit = bench_enum;
    if (!bench_out.empty()) cmd.out_path = bench_out;
    return cmd_bench(cmd, out, err);
  } catch (const std::invalid_argument& e) {
    err << "meval: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace meval::cli
