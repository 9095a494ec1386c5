#include "meval/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "meval/errors.hpp"

namespace meval::io {

namespace {

using nlohmann::json;

std::string required_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing required field \"") + key + "\"");
  if (!it->is_string()) throw ParseError(line, std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

std::optional<double> optional_time(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(line, std::string("field \"") + key + "\" must be a number");
  const double t = it->get<double>();
  if (!(t >= 0.0)) throw ParseError(line, std::string("field \"") + key + "\" must be non-negative");
  return t;
}

json counts_json(const ErrorCounts& c) {
  return {{"correct", c.correct},
          {"deletions", c.deletions},
          {"insertions", c.insertions},
          {"substitutions", c.substitutions}};
}

// Shared fields of per-session results and aggregates.
json rate_json(const ErrorCounts& c) {
  const Rate rate = error_rate(c);
  json out;
  out["counts"] = counts_json(c);
  out["errors"] = c.errors();
  out["length"] = c.ref_length;
  out["rate"] = rate.fraction();
  out["rate_decimal"] = rate.decimal();
  out["undefined"] = c.ref_length == 0;
  return out;
}

json optional_label(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json result_json(const WerResult& r) {
  json out = rate_json(r.counts);
  json decisions = json::array();
  for (const auto& d : r.assignment.decisions)
    decisions.push_back(
        {{"channel", optional_label(d.channel)}, {"speaker", d.speaker}, {"utterance", d.utterance}});
  json assignment{{"decisions", std::move(decisions)}};
  if (!r.assignment.pairs.empty()) {
    json pairs = json::array();
    for (const auto& p : r.assignment.pairs)
      pairs.push_back({{"channel", optional_label(p.channel)}, {"speaker", optional_label(p.speaker)}});
    assignment["pairs"] = std::move(pairs);
  }
  out["assignment"] = std::move(assignment);
  return out;
}

}  // namespace

std::vector<SegmentRecord> parse_seglst(std::istream& in) {
  std::vector<SegmentRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");

    SegmentRecord rec;
    rec.session_id = required_string(obj, "session_id", line_no);
    rec.speaker = required_string(obj, "speaker", line_no);
    rec.words = required_string(obj, "words", line_no);
    if (rec.session_id.empty()) throw ParseError(line_no, "empty session_id");
    if (rec.speaker.empty()) throw ParseError(line_no, "empty speaker");
    rec.start_time = optional_time(obj, "start_time", line_no);
    rec.end_time = optional_time(obj, "end_time", line_no);
    if (rec.start_time && rec.end_time && *rec.end_time < *rec.start_time)
      throw ParseError(line_no, "end_time before start_time");
    rec.source_index = line_no;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SegmentRecord> read_seglst(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return parse_seglst(in);
}

void write_seglst(std::ostream& out, const std::vector<SegmentRecord>& records) {
  for (const auto& r : records) {
    json obj{{"session_id", r.session_id}, {"speaker", r.speaker}, {"words", r.words}};
    if (r.start_time) obj["start_time"] = *r.start_time;
    if (r.end_time) obj["end_time"] = *r.end_time;
    out << obj.dump() << '\n';
  }
}

std::vector<Session> group_sessions(const std::vector<SegmentRecord>& refs,
                                    const std::vector<SegmentRecord>& hyps) {
  std::map<std::string, std::map<std::string, std::vector<const SegmentRecord*>>> ref_by, hyp_by;
  for (const auto& r : refs) ref_by[r.session_id][r.speaker].push_back(&r);
  for (const auto& h : hyps) hyp_by[h.session_id][h.speaker].push_back(&h);
  for (const auto& [id, _] : hyp_by) ref_by.try_emplace(id);

  std::vector<Session> sessions;
  for (const auto& [id, speakers] : ref_by) {
    std::vector<Speaker> spk_list;
    for (const auto& [label, recs] : speakers) {
      Speaker spk{label, {}};
      for (const auto* r : recs) spk.utterances.push_back({tokenize(r->words), r->start_time, r->source_index});
      spk_list.push_back(std::move(spk));
    }

    std::vector<Channel> channels;
    if (auto it = hyp_by.find(id); it != hyp_by.end()) {
      for (auto [label, recs] : it->second) {
        const bool timed = std::all_of(recs.begin(), recs.end(),
                                       [](const SegmentRecord* r) { return r->start_time.has_value(); });
        if (timed)
          std::stable_sort(recs.begin(), recs.end(), [](const SegmentRecord* a, const SegmentRecord* b) {
            return *a->start_time < *b->start_time;
          });
        Channel ch{label, {}};
        for (const auto* r : recs) {
          auto words = tokenize(r->words);
          ch.words.insert(ch.words.end(), words.begin(), words.end());
        }
        channels.push_back(std::move(ch));
      }
    } else {
      channels.push_back({"empty", {}});
    }
    sessions.push_back({id, ReferenceSet(std::move(spk_list)), HypothesisSet(std::move(channels))});
  }
  return sessions;
}

std::map<std::string, ErrorCounts> Report::aggregate() const {
  std::map<std::string, ErrorCounts> out;
  for (const auto& m : metadata.metrics) out.try_emplace(m);
  for (const auto& [_, metrics] : per_session)
    for (const auto& [name, result] : metrics) out[name] = combine(out[name], result.counts);
  return out;
}

std::string write_report(const Report& report) {
  json root;
  root["schema"] = kReportSchema;
  root["metadata"] = {{"costs",
                       {{"correct", report.metadata.costs.correct},
                        {"deletion", report.metadata.costs.deletion},
                        {"insertion", report.metadata.costs.insertion},
                        {"substitution", report.metadata.costs.substitution}}},
                      {"method", report.metadata.method},
                      {"metrics", report.metadata.metrics},
                      {"tool_version", report.metadata.tool_version}};
  json sessions = json::object();
  for (const auto& [id, metrics] : report.per_session) {
    json per = json::object();
    for (const auto& [name, result] : metrics) per[name] = result_json(result);
    sessions[id] = std::move(per);
  }
  root["per_session"] = std::move(sessions);
  json aggregate = json::object();
  for (const auto& [name, counts] : report.aggregate()) aggregate[name] = rate_json(counts);
  root["aggregate"] = std::move(aggregate);
  return root.dump() + "\n";
}

}  // namespace meval::io
