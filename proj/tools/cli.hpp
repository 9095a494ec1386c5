#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meval/io.hpp"
#include "meval/matchers.hpp"
#include "meval/oracle.hpp"
#include "meval/scenario.hpp"

namespace meval::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kInputError = 2, kBudgetError = 3 };

enum class Metric { mimo, orc, cp };
enum class Method { dp, brute_force };

Metric parse_metric(std::string_view name);  // mimo | orcwer | cpwer
std::string metric_name(Metric metric);
Method parse_method(std::string_view name);  // dp | brute-force
std::string method_name(Method method);

// "correct,sub,ins,del", e.g. "0,1,1,1".
CostConfig parse_costs(std::string_view text);

struct SolveOptions {
  CostConfig costs;
  Method method = Method::dp;
  std::size_t memory_limit = kDefaultMemoryLimit;
  std::size_t enumeration_limit = oracle::kDefaultEnumerationLimit;
};

WerResult solve(Metric metric, const ReferenceSet& refs, const HypothesisSet& hyps,
                const SolveOptions& options);

// Scores every session, `jobs` sessions at a time. The report does not depend
// on `jobs`.
io::Report score_sessions(Metric metric, const std::vector<io::Session>& sessions,
                          const SolveOptions& options, unsigned jobs);

struct ScoreCommand {
  Metric metric = Metric::mimo;
  std::string ref_path;
  std::string hyp_path;
  std::optional<std::string> out_path;  // stdout when absent
  SolveOptions solve;
  unsigned jobs = 0;  // 0: hardware concurrency
};

int cmd_score(const ScoreCommand& cmd, std::ostream& out, std::ostream& err);

enum class BenchMethod { mimo, orc_dp, orc_brute_force, cpwer };

BenchMethod parse_bench_method(std::string_view name);
std::string bench_method_name(BenchMethod method);

// Semicolon-separated assignments over the keys K, C, U, W, V, seed and
// corruption. Integer values are comma lists or lo:hi[:step] ranges, e.g.
// "K=4;C=2;U=2:80:2;W=10;corruption=0.1". Missing keys keep the
// BenchScenario defaults. Expands to the cartesian product in key order.
std::vector<BenchScenario> parse_grid(std::string_view spec);

struct BenchRow {
  BenchMethod method;
  BenchScenario scenario;
  std::optional<double> seconds;  // nullopt: skipped
};

struct BenchCommand {
  std::vector<BenchScenario> grid;
  std::vector<BenchMethod> methods{BenchMethod::mimo, BenchMethod::orc_dp,
                                   BenchMethod::orc_brute_force, BenchMethod::cpwer};
  std::size_t repetitions = 3;
  std::size_t memory_limit = kDefaultMemoryLimit;
  std::size_t enumeration_limit = oracle::kDefaultEnumerationLimit;
  // Once a method's median exceeds this, its remaining grid points are skipped.
  double time_budget = 60.0;
  std::optional<std::string> out_path;
};

// Median solve time per grid point and method, around one warm-up solve.
// Rows are emitted through `sink` as they complete.
void run_bench(const BenchCommand& cmd, const std::function<void(const BenchRow&)>& sink);

// nullopt when the solver refuses the instance (memory or enumeration limit).
std::optional<double> time_solve(BenchMethod method, const GeneratedSession& session,
                                 const BenchCommand& cmd);

void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRow& row);

int cmd_bench(const BenchCommand& cmd, std::ostream& out, std::ostream& err);

// Full command line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace meval::cli
