#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meval/types.hpp"

namespace meval::io {

// One line of a segment-list file. For hypotheses `speaker` names the output
// channel.
struct SegmentRecord {
  std::string session_id;
  std::string speaker;
  std::string words;
  std::optional<double> start_time;
  std::optional<double> end_time;
  std::size_t source_index = 0;  // 1-based line number
};

// Newline-delimited JSON objects. Blank lines are skipped, unknown fields
// ignored. Throws ParseError naming the line on malformed input.
std::vector<SegmentRecord> parse_seglst(std::istream& in);
std::vector<SegmentRecord> read_seglst(const std::string& path);

// Inverse of parse_seglst for the known fields.
void write_seglst(std::ostream& out, const std::vector<SegmentRecord>& records);

struct Session {
  std::string id;
  ReferenceSet refs;
  HypothesisSet hyps;
};

// Buckets by session id (sorted). A session without hypothesis records gets
// one empty channel.
std::vector<Session> group_sessions(const std::vector<SegmentRecord>& refs,
                                    const std::vector<SegmentRecord>& hyps);

inline constexpr const char* kReportSchema = "meval-report/1";
inline constexpr const char* kToolVersion = "1.0.0";

struct ReportMetadata {
  std::string tool_version = kToolVersion;
  CostConfig costs;
  std::string method = "dp";
  // Metrics that were scored; each appears in the aggregate even when the
  // corpus is empty.
  std::vector<std::string> metrics;
};

struct Report {
  ReportMetadata metadata;
  // session id -> metric name -> result
  std::map<std::string, std::map<std::string, WerResult>> per_session;

  // metric name -> pooled counts over all sessions
  std::map<std::string, ErrorCounts> aggregate() const;
};

// Canonical JSON: sorted keys, exact integer counts, rates as "n/d" plus a
// six-decimal string. Identical reports give identical bytes.
std::string write_report(const Report& report);

}  // namespace meval::io
