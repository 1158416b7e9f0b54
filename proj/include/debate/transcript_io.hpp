#pragma once

// Transcript JSONL and metrics CSV persistence.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "debate/metrics.hpp"
#include "debate/text.hpp"

namespace debate {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

namespace detail {

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

inline json to_json(const RunUnit& u) {
  return {{"event_id", u.event_id},
          {"seed_index", u.seed_index},
          {"protocol", to_string(u.protocol)},
          {"master_seed", u.master_seed}};
}

inline RunUnit run_unit_from_json(const json& j) {
  RunUnit u;
  u.event_id = j.at("event_id").get<std::string>();
  u.seed_index = j.at("seed_index").get<int>();
  u.protocol = parse_protocol(j.at("protocol").get<std::string>());
  u.master_seed = j.at("master_seed").get<std::uint64_t>();
  return u;
}

inline json to_json(const TurnRecord& t) {
  json cands = json::array();
  for (const auto& c : t.candidates)
    cands.push_back({{"temperature", c.temperature},
                     {"raw_likert", c.score ? json(c.score->raw_likert) : json(nullptr)},
                     {"score", c.score ? json(c.score->normalized) : json(nullptr)},
                     {"text", c.text}});
  return {{"round", t.round},
          {"order_position", t.order_position},
          {"role", t.role},
          {"model_id", t.model_id},
          {"text", t.text},
          {"forecast", detail::opt_json(t.forecast)},
          {"judge_score", detail::opt_json(t.judge_score)},
          {"candidates", cands},
          {"selected_candidate", t.selected_candidate},
          {"silenced", t.silenced},
          {"prompt_sha256", t.prompt_sha256}};
}

inline TurnRecord turn_from_json(const json& j) {
  TurnRecord t;
  t.round = j.at("round").get<int>();
  t.order_position = j.at("order_position").get<int>();
  t.role = j.at("role").get<std::string>();
  t.model_id = j.at("model_id").get<std::string>();
  t.text = j.at("text").get<std::string>();
  t.forecast = detail::opt_from<double>(j, "forecast");
  t.judge_score = detail::opt_from<double>(j, "judge_score");
  for (const auto& c : j.at("candidates")) {
    CandidateRecord rec;
    rec.temperature = c.at("temperature").get<double>();
    if (auto raw = detail::opt_from<int>(c, "raw_likert")) rec.score = JudgeScore::from_raw(*raw);
    rec.text = c.at("text").get<std::string>();
    t.candidates.push_back(std::move(rec));
  }
  t.selected_candidate = j.at("selected_candidate").get<int>();
  t.silenced = j.at("silenced").get<bool>();
  t.prompt_sha256 = j.at("prompt_sha256").get<std::string>();
  return t;
}

inline json to_json(const Transcript& tr, const std::string& config_hash) {
  json rounds = json::array();
  for (const auto& r : tr.rounds) {
    json turns = json::array();
    for (const auto& t : r) turns.push_back(to_json(t));
    rounds.push_back(std::move(turns));
  }
  return {{"schema_version", kSchemaVersion},
          {"config_hash", config_hash},
          {"unit", to_json(tr.unit)},
          {"protocol",
           {{"kind", to_string(tr.protocol.kind)},
            {"rounds", tr.protocol.rounds},
            {"silencing_enabled", tr.protocol.silencing_enabled},
            {"candidates_per_turn", tr.protocol.candidates_per_turn}}},
          {"rounds", rounds},
          {"orderings", tr.orderings},
          {"silenced_roles", tr.silenced_roles},
          {"failed", tr.failed},
          {"failure_kind", tr.failure_kind ? json(to_string(*tr.failure_kind)) : json(nullptr)},
          {"failure_message", tr.failure_message}};
}

struct StoredTranscript {
  Transcript transcript;
  std::string config_hash;
  std::size_t line = 0;
};

/// Parses one JSONL record; throws std::runtime_error on malformed input or
/// an unsupported schema version.
inline StoredTranscript transcript_from_json_line(std::string_view line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw std::runtime_error("record is not a JSON object");
  const int version = j.at("schema_version").get<int>();
  if (version != kSchemaVersion)
    throw std::runtime_error("unsupported schema_version " + std::to_string(version) + " (expected " +
                             std::to_string(kSchemaVersion) + ")");
  StoredTranscript st;
  st.config_hash = j.at("config_hash").get<std::string>();
  Transcript& tr = st.transcript;
  tr.unit = run_unit_from_json(j.at("unit"));
  const auto& p = j.at("protocol");
  tr.protocol.kind = parse_protocol(p.at("kind").get<std::string>());
  tr.protocol.rounds = p.at("rounds").get<int>();
  tr.protocol.silencing_enabled = p.at("silencing_enabled").get<bool>();
  tr.protocol.candidates_per_turn = p.at("candidates_per_turn").get<int>();
  for (const auto& r : j.at("rounds")) {
    tr.rounds.emplace_back();
    for (const auto& t : r) tr.rounds.back().push_back(turn_from_json(t));
  }
  tr.orderings = j.at("orderings").get<std::vector<std::vector<std::string>>>();
  tr.silenced_roles = j.at("silenced_roles").get<std::vector<std::vector<std::string>>>();
  tr.failed = j.at("failed").get<bool>();
  if (auto k = detail::opt_from<std::string>(j, "failure_kind")) tr.failure_kind = parse_failure_kind(*k);
  tr.failure_message = j.at("failure_message").get<std::string>();
  if (tr.unit.protocol != tr.protocol.kind) throw std::runtime_error("unit and protocol kinds disagree");
  return st;
}

inline std::string transcript_line(const Transcript& tr, const std::string& config_hash) {
  return to_json(tr, config_hash).dump() + "\n";
}

/// Reads a transcript JSONL file. Strict mode throws ConfigError naming the
/// offending line; lenient mode skips unreadable lines (used when resuming).
inline std::vector<StoredTranscript> read_transcripts(const std::filesystem::path& path, bool strict = true,
                                                      std::size_t* skipped = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open transcripts file: " + path.string());
  std::vector<StoredTranscript> out;
  std::string line;
  std::size_t bad = 0;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    try {
      auto st = transcript_from_json_line(line);
      st.line = lineno;
      out.push_back(std::move(st));
    } catch (const std::exception& e) {
      if (strict) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      ++bad;
    }
  }
  if (skipped) *skipped = bad;
  return out;
}

// ---------------------------------------------------------------------------
// Metrics CSV
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& metrics_header() {
  static const std::vector<std::string> h = {
      "event_id", "seed_index", "protocol", "master_seed", "prr", "ad", "cf", "n_turns",
      "first_round_variance", "final_round_variance", "valid_forecast_counts", "config_hash"};
  return h;
}

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline std::string join_fields(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\n";
}

}  // namespace detail

/// PRR is written as "NA" when not applicable; other missing values are empty.
/// `config_hashes` holds one hash per row.
inline std::string format_metrics_csv(const std::vector<MetricsRecord>& rows,
                                      const std::vector<std::string>& config_hashes) {
  if (config_hashes.size() != rows.size()) throw std::invalid_argument("format_metrics_csv: one hash per row");
  std::string out = detail::join_fields(metrics_header());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& m = rows[r];
    std::string counts;
    for (std::size_t i = 0; i < m.valid_forecast_counts.size(); ++i)
      counts += (i ? ";" : "") + std::to_string(m.valid_forecast_counts[i]);
    const std::string prr = m.unit.protocol == ProtocolKind::NI ? "NA" : detail::opt_cell(m.prr);
    out += detail::join_fields({m.unit.event_id, std::to_string(m.unit.seed_index),
                                std::string(to_string(m.unit.protocol)), std::to_string(m.unit.master_seed),
                                prr, detail::opt_cell(m.ad), detail::opt_cell(m.cf), std::to_string(m.n_turns),
                                detail::opt_cell(m.first_round_variance),
                                detail::opt_cell(m.final_round_variance), counts, config_hashes[r]});
  }
  return out;
}

inline std::string format_metrics_csv(const std::vector<MetricsRecord>& rows, const std::string& config_hash) {
  return format_metrics_csv(rows, std::vector<std::string>(rows.size(), config_hash));
}

struct MetricsTable {
  std::vector<MetricsRecord> rows;
  std::set<std::string> config_hashes;
};

inline MetricsTable parse_metrics_csv(std::string_view data, const std::string& origin = "<memory>") {
  std::vector<CsvRecord> recs;
  try {
    recs = parse_csv(data);
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (recs.empty()) throw ConfigError(origin + ": missing header row");
  if (recs.front().fields != metrics_header()) throw ConfigError(origin + ": unexpected metrics header");
  MetricsTable table;
  for (std::size_t r = 1; r < recs.size(); ++r) {
    const auto& f = recs[r].fields;
    const std::string where = origin + ":" + std::to_string(recs[r].line);
    if (f.size() != metrics_header().size())
      throw ConfigError(where + ": expected " + std::to_string(metrics_header().size()) + " fields, got " +
                        std::to_string(f.size()));
    auto cell = [&](std::size_t i) -> std::optional<double> {
      if (f[i].empty() || f[i] == "NA") return std::nullopt;
      auto v = parse_double(f[i]);
      if (!v) throw ConfigError(where + ": invalid number '" + f[i] + "' in column " + metrics_header()[i]);
      return v;
    };
    auto integer = [&](std::size_t i) {
      auto v = cell(i);
      if (!v || *v != static_cast<double>(static_cast<long long>(*v)))
        throw ConfigError(where + ": invalid integer in column " + metrics_header()[i]);
      return static_cast<long long>(*v);
    };
    MetricsRecord m;
    m.unit.event_id = f[0];
    m.unit.seed_index = static_cast<int>(integer(1));
    try {
      m.unit.protocol = parse_protocol(f[2]);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    try {
      m.unit.master_seed = std::stoull(f[3]);
    } catch (const std::exception&) {
      throw ConfigError(where + ": invalid master_seed");
    }
    m.prr = cell(4);
    m.ad = cell(5);
    m.cf = cell(6);
    m.n_turns = static_cast<int>(integer(7));
    m.first_round_variance = cell(8);
    m.final_round_variance = cell(9);
    if (!f[10].empty())
      for (const auto& c : split(f[10], ';')) {
        auto v = parse_double(c);
        if (!v) throw ConfigError(where + ": invalid valid_forecast_counts");
        m.valid_forecast_counts.push_back(static_cast<int>(*v));
      }
    for (auto v : {m.prr, m.ad, m.cf})
      if (v && (*v < 0 || *v > 1)) throw ConfigError(where + ": metric value outside [0,1]");
    table.config_hashes.insert(f[11]);
    table.rows.push_back(std::move(m));
  }
  return table;
}

inline MetricsTable load_metrics_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("metrics file not found: " + path.string());
  return parse_metrics_csv(read_file_bytes(path), path.string());
}

/// Writes through a temporary file and renames, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace debate
