#pragma once

// Experiment configuration and the select / run / metrics / analyze /
// validate-judge commands.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "debate/analysis.hpp"
#include "debate/dataset.hpp"
#include "debate/debate.hpp"
#include "debate/http_backend.hpp"
#include "debate/scripted.hpp"
#include "debate/selection.hpp"
#include "debate/transcript_io.hpp"

namespace debate {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitUnitFailures = 1, kExitConfigError = 2 };

struct ExperimentConfig {
  fs::path dataset;
  fs::path embeddings;
  fs::path output_dir = "out";
  fs::path subset_file;    // defaults to <output_dir>/subset.json
  fs::path templates_dir;  // empty: built-in templates
  std::size_t subset_k = 20;
  std::optional<std::string> start_id;
  DistanceKind distance = DistanceKind::cosine;

  int seeds = 5;
  std::vector<ProtocolKind> protocols{kAllProtocols.begin(), kAllProtocols.end()};
  int rounds = 2;
  int candidates = 2;
  bool silencing = true;  // applies to RA-CR
  std::uint64_t master_seed = 0;

  bool scripted = false;
  std::vector<std::string> agent_models;  // one per role, Agent A..C
  std::string judge_model;
  std::string endpoint_url = BackendConfig{}.endpoint_url;
  std::string judge_endpoint_url;  // empty: same as endpoint_url
  int timeout_ms = 120000;
  int retries = 2;
  int judge_parse_retries = 1;

  DecodingParams decoding;
  double order_temperature = 0.25;
  double cf_epsilon = kDefaultCfEpsilon;
  int workers = 0;  // 0: min(hardware threads, 4)

  AnalysisConfig analysis;
  std::vector<Comparison> comparisons;  // empty: defaults over the protocols present
  bool allow_mixed_hashes = false;

  fs::path judge_pairs;
  double judge_margin = 0.05;

  fs::path subset_path() const { return subset_file.empty() ? output_dir / "subset.json" : subset_file; }
  fs::path transcripts_path() const { return output_dir / "transcripts.jsonl"; }
  fs::path manifest_path() const { return output_dir / "manifest.json"; }
  fs::path metrics_path() const { return output_dir / "metrics.csv"; }

  int effective_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    return static_cast<int>(std::min(hw, 4U));
  }

  std::string agent_model(std::size_t i) const {
    if (i < agent_models.size() && !agent_models[i].empty()) return agent_models[i];
    return scripted ? "scripted-agent-" + std::string(1, static_cast<char>('a' + i)) : std::string();
  }

  std::string judge_model_id() const {
    if (!judge_model.empty()) return judge_model;
    return scripted ? "scripted-judge" : std::string();
  }

  ProtocolSpec protocol_spec(ProtocolKind kind) const {
    ProtocolSpec spec = ProtocolSpec::defaults(kind);
    spec.rounds = rounds;
    spec.candidates_per_turn = candidates;
    spec.silencing_enabled = kind == ProtocolKind::RA_CR && silencing;
    return spec;
  }

  void validate_run() const {
    if (protocols.empty()) throw ConfigError("at least one protocol is required");
    std::set<ProtocolKind> uniq(protocols.begin(), protocols.end());
    if (uniq.size() != protocols.size()) throw ConfigError("protocol list contains duplicates");
    if (seeds < 1) throw ConfigError("seeds must be >= 1");
    if (workers < 0) throw ConfigError("workers must be >= 1 (or 0 for automatic)");
    for (auto k : protocols) protocol_spec(k).validate();
    decoding.validate();
    if (!(order_temperature > 0)) throw ConfigError("order temperature must be > 0");
    if (!(cf_epsilon >= 0)) throw ConfigError("cf epsilon must be >= 0");
    if (!scripted) {
      for (std::size_t i = 0; i < kPeerNames.size(); ++i)
        if (agent_model(i).empty())
          throw ConfigError("live mode needs a model id for " + std::string(kPeerNames[i]));
      if (judge_model_id().empty()) throw ConfigError("live mode needs a judge model id");
    }
    if (dataset.empty()) throw ConfigError("dataset path is required");
    if (!fs::exists(dataset)) throw ConfigError("dataset not found: " + dataset.string());
  }
};

// ---------------------------------------------------------------------------
// Subset manifest
// ---------------------------------------------------------------------------

struct SubsetManifest {
  std::vector<std::string> ids;
  std::string dataset_sha256;
  std::string embeddings_sha256;
  std::string start_rule;
  std::string distance;
  double objective = 0;
};

inline json to_json(const SubsetManifest& s) {
  return {{"ids", s.ids},
          {"k", s.ids.size()},
          {"dataset_sha256", s.dataset_sha256},
          {"embeddings_sha256", s.embeddings_sha256},
          {"start_rule", s.start_rule},
          {"distance", s.distance},
          {"min_pairwise_distance", s.objective},
          {"tool_version", kToolVersion}};
}

inline SubsetManifest load_subset_manifest(const fs::path& path) {
  if (!fs::exists(path))
    throw ConfigError("subset manifest not found: " + path.string() + " (run `debate select` first)");
  const auto j = json::parse(read_file_bytes(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("ids") || !j["ids"].is_array())
    throw ConfigError("invalid subset manifest: " + path.string());
  SubsetManifest s;
  s.ids = j["ids"].get<std::vector<std::string>>();
  s.dataset_sha256 = j.value("dataset_sha256", "");
  s.embeddings_sha256 = j.value("embeddings_sha256", "");
  s.start_rule = j.value("start_rule", "");
  s.distance = j.value("distance", "");
  s.objective = j.value("min_pairwise_distance", 0.0);
  if (s.ids.empty()) throw ConfigError("subset manifest lists no events: " + path.string());
  return s;
}

/// Selects the diverse subset and writes its manifest. Re-running with the
/// same inputs rewrites identical bytes.
inline SubsetManifest cmd_select(const ExperimentConfig& cfg) {
  if (cfg.dataset.empty()) throw ConfigError("dataset path is required");
  const EventDataset ds = load_event_dataset(cfg.dataset);
  if (cfg.embeddings.empty() || !fs::exists(cfg.embeddings))
    throw ConfigError("embeddings file not found: " +
                      (cfg.embeddings.empty() ? std::string("<unset>") : cfg.embeddings.string()) +
                      ". Generate it with the embed-export tool first.");
  std::set<std::string> known;
  for (const auto& e : ds.events) known.insert(e.id);
  const EmbeddingTable table = load_embeddings(cfg.embeddings, &known);
  std::vector<std::string> absent;
  for (const auto& e : ds.events)
    if (!table.index_of(e.id)) absent.push_back(e.id);
  if (!absent.empty())
    throw ConfigError("embeddings file has no vector for " + std::to_string(absent.size()) +
                      " dataset event(s), first: '" + absent.front() + "'");

  SubsetManifest s;
  s.ids = max_min_select(table, cfg.subset_k, StartRule{cfg.start_id}, cfg.distance);
  s.dataset_sha256 = ds.sha256;
  s.embeddings_sha256 = sha256_file(cfg.embeddings);
  s.start_rule = cfg.start_id ? "fixed:" + *cfg.start_id : "farthest-from-centroid";
  s.distance = std::string(to_string(cfg.distance));
  s.objective = s.ids.size() > 1 ? max_min_objective(table, s.ids, cfg.distance) : 0.0;
  const fs::path out = cfg.subset_path();
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_file_atomic(out, to_json(s).dump(2) + "\n");
  return s;
}

// ---------------------------------------------------------------------------
// Run
// ---------------------------------------------------------------------------

struct RunContext {
  EventDataset dataset;
  SubsetManifest subset;
  PromptTemplates templates;
  json run_config;  // everything that determines transcript content
  std::string config_hash;
};

inline RunContext prepare_run(const ExperimentConfig& cfg) {
  cfg.validate_run();
  RunContext ctx;
  ctx.dataset = load_event_dataset(cfg.dataset);
  ctx.subset = load_subset_manifest(cfg.subset_path());
  if (!ctx.subset.dataset_sha256.empty() && ctx.subset.dataset_sha256 != ctx.dataset.sha256)
    throw ConfigError("subset manifest was built from a different dataset (hash mismatch)");
  for (const auto& id : ctx.subset.ids)
    if (!ctx.dataset.find(id)) throw ConfigError("subset id '" + id + "' is not in the dataset");
  ctx.templates = PromptTemplates::load(cfg.templates_dir);

  json protocols = json::array();
  for (auto k : cfg.protocols) protocols.push_back(to_string(k));
  json models = json::object();
  for (std::size_t i = 0; i < kPeerNames.size(); ++i) models[std::string(kPeerNames[i])] = cfg.agent_model(i);
  ctx.run_config = {
      {"dataset_sha256", ctx.dataset.sha256},
      {"subset_ids", ctx.subset.ids},
      {"seeds", cfg.seeds},
      {"protocols", protocols},
      {"rounds", cfg.rounds},
      {"candidates_per_turn", cfg.candidates},
      {"silencing", cfg.silencing},
      {"master_seed", cfg.master_seed},
      {"mode", cfg.scripted ? "scripted" : "live"},
      {"agent_models", models},
      {"judge_model", cfg.judge_model_id()},
      {"judge_parse_retries", cfg.judge_parse_retries},
      {"decoding",
       {{"base_temperature", cfg.decoding.base_temperature},
        {"jitter_step", cfg.decoding.jitter_step},
        {"max_tokens", cfg.decoding.max_tokens},
        {"zero_based_jitter", cfg.decoding.zero_based_jitter}}},
      {"order_temperature", cfg.order_temperature},
      {"templates",
       {{"system_sha256", sha256_hex(ctx.templates.system_template)},
        {"format_sha256", sha256_hex(ctx.templates.format_instruction)},
        {"rubric_sha256", sha256_hex(ctx.templates.rubric)}}}};
  ctx.config_hash = sha256_hex(ctx.run_config.dump()).substr(0, 16);
  return ctx;
}

/// Canonical grid: protocols (config order) x subset ids (selection order) x seeds.
inline std::vector<RunUnit> experiment_grid(const ExperimentConfig& cfg, const std::vector<std::string>& ids) {
  std::vector<RunUnit> grid;
  for (auto p : cfg.protocols)
    for (const auto& id : ids)
      for (int s = 0; s < cfg.seeds; ++s) grid.push_back({id, s, p, cfg.master_seed});
  return grid;
}

inline JudgeConfig make_judge(const ExperimentConfig& cfg, const PromptTemplates& templates) {
  JudgeConfig judge;
  if (cfg.scripted) {
    judge.backend = std::make_shared<ScriptedJudge>(cfg.judge_model_id());
  } else {
    BackendConfig bc;
    bc.endpoint_url = cfg.judge_endpoint_url.empty() ? cfg.endpoint_url : cfg.judge_endpoint_url;
    bc.model_id = cfg.judge_model_id();
    bc.timeout = std::chrono::milliseconds(cfg.timeout_ms);
    bc.retries = cfg.retries;
    judge.backend = std::make_shared<HttpBackend>(bc);
  }
  judge.rubric_text = templates.rubric;
  judge.parse_retries = cfg.judge_parse_retries;
  return judge;
}

inline DebateSetup make_setup(const ExperimentConfig& cfg, const PromptTemplates& templates) {
  DebateSetup setup;
  setup.templates = templates;
  setup.decoding = cfg.decoding;
  setup.order_temperature = cfg.order_temperature;
  std::vector<std::string> models;
  for (std::size_t i = 0; i < kPeerNames.size(); ++i) models.push_back(cfg.agent_model(i));
  setup.roles = default_roles(models);
  for (const auto& role : setup.roles) {
    if (cfg.scripted) {
      setup.backends[role.name] = std::make_shared<ScriptedAgent>(ScriptParams{}, role.model_id);
    } else {
      BackendConfig bc;
      bc.endpoint_url = cfg.endpoint_url;
      bc.model_id = role.model_id;
      bc.timeout = std::chrono::milliseconds(cfg.timeout_ms);
      bc.retries = cfg.retries;
      setup.backends[role.name] = std::make_shared<HttpBackend>(bc);
    }
  }
  setup.judge = make_judge(cfg, templates);
  return setup;
}

struct RunSummary {
  std::size_t total = 0;
  std::size_t executed = 0;
  std::size_t skipped = 0;  // already complete from an earlier run
  std::size_t failed = 0;
  std::map<std::string, std::size_t> failures_by_kind;
  std::string config_hash;
};

/// Keeps the newest valid record per grid unit, written in grid order.
inline std::map<std::string, std::string> compact_transcripts(const fs::path& path,
                                                              const std::vector<RunUnit>& grid,
                                                              const std::string& config_hash) {
  std::map<std::string, std::string> latest;
  if (!fs::exists(path)) return latest;
  std::size_t bad = 0;
  const auto stored = read_transcripts(path, false, &bad);
  if (bad) log_warn("dropping " + std::to_string(bad) + " unreadable transcript line(s) from " + path.string());
  std::set<std::string> in_grid;
  for (const auto& u : grid) in_grid.insert(unit_key(u));
  for (const auto& st : stored) {
    if (st.config_hash != config_hash)
      throw ConfigError(path.string() + ":" + std::to_string(st.line) + ": transcript was produced by config " +
                        st.config_hash + ", current config is " + config_hash +
                        "; use a fresh output directory");
    const std::string key = unit_key(st.transcript.unit);
    if (in_grid.count(key)) latest[key] = transcript_line(st.transcript, config_hash);
  }
  return latest;
}

inline void write_grid_file(const fs::path& path, const std::vector<RunUnit>& grid,
                            const std::map<std::string, std::string>& lines) {
  std::string content;
  for (const auto& u : grid)
    if (auto it = lines.find(unit_key(u)); it != lines.end()) content += it->second;
  write_file_atomic(path, content);
}

inline json run_manifest(const ExperimentConfig& cfg, const RunContext& ctx, const RunSummary& summary) {
  json protocols = json::array();
  for (auto k : cfg.protocols) protocols.push_back(to_string(k));
  return {{"tool_version", kToolVersion},
          {"config_hash", ctx.config_hash},
          {"config", ctx.run_config},
          {"dataset",
           {{"path", cfg.dataset.generic_string()},
            {"sha256", ctx.dataset.sha256},
            {"events", ctx.dataset.events.size()},
            {"columns",
             {{"id", ctx.dataset.columns.id ? json(*ctx.dataset.columns.id) : json(nullptr)},
              {"date", ctx.dataset.columns.date},
              {"value", ctx.dataset.columns.value},
              {"event", ctx.dataset.columns.event},
              {"relation", ctx.dataset.columns.relation}}}}},
          {"subset",
           {{"ids", ctx.subset.ids},
            {"embeddings_sha256", ctx.subset.embeddings_sha256},
            {"start_rule", ctx.subset.start_rule},
            {"distance", ctx.subset.distance}}},
          {"master_seed", cfg.master_seed},
          {"protocols", protocols},
          {"seeds", cfg.seeds},
          {"units", {{"total", summary.total}, {"failed", summary.failed}}}};
}

/// Executes every grid unit not already complete in transcripts.jsonl.
inline RunSummary cmd_run(const ExperimentConfig& cfg) {
  const RunContext ctx = prepare_run(cfg);
  const auto grid = experiment_grid(cfg, ctx.subset.ids);
  fs::create_directories(cfg.output_dir);
  const fs::path tpath = cfg.transcripts_path();

  // Normalise the existing file first so appends never follow a torn line.
  auto existing = compact_transcripts(tpath, grid, ctx.config_hash);
  write_grid_file(tpath, grid, existing);

  RunSummary summary;
  summary.total = grid.size();
  summary.config_hash = ctx.config_hash;
  std::vector<RunUnit> todo;
  for (const auto& u : grid) {
    auto it = existing.find(unit_key(u));
    const bool done = it != existing.end() && !transcript_from_json_line(it->second).transcript.failed;
    if (done) ++summary.skipped;
    else todo.push_back(u);
  }

  const DebateSetup setup = make_setup(cfg, ctx.templates);
  std::map<ProtocolKind, ProtocolSpec> specs;
  for (auto k : cfg.protocols) specs[k] = cfg.protocol_spec(k);

  std::ofstream out(tpath, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to " + tpath.string());
  std::mutex out_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr fatal;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) {
      try {
        const RunUnit& u = todo[i];
        const Transcript tr = run_debate(u, specs.at(u.protocol), *ctx.dataset.find(u.event_id), setup);
        const std::string line = transcript_line(tr, ctx.config_hash);
        std::lock_guard lock(out_mu);
        out << line << std::flush;
        existing[unit_key(u)] = line;
        if (tr.failed) {
          ++summary.failed;
          ++summary.failures_by_kind[std::string(to_string(*tr.failure_kind))];
          log_warn("unit " + unit_key(u) + " failed (" + std::string(to_string(*tr.failure_kind)) +
                   "): " + tr.failure_message);
        }
        const std::size_t n = ++done;
        if (n % 50 == 0 || n == todo.size())
          log_info("completed " + std::to_string(n) + "/" + std::to_string(todo.size()) + " units");
      } catch (...) {
        std::lock_guard lock(out_mu);
        if (!fatal) fatal = std::current_exception();
        next = todo.size();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.effective_workers(), static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  out.close();
  if (fatal) std::rethrow_exception(fatal);
  summary.executed = todo.size();

  write_grid_file(tpath, grid, existing);
  write_file_atomic(cfg.manifest_path(), run_manifest(cfg, ctx, summary).dump(2) + "\n");
  return summary;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct MetricsSummary {
  std::size_t rows = 0;
  std::size_t failed_units = 0;
  std::vector<std::string> failed_keys;
};

inline MetricsSummary cmd_metrics(const fs::path& transcripts, const fs::path& out_csv,
                                  double cf_epsilon = kDefaultCfEpsilon) {
  if (!fs::exists(transcripts)) throw ConfigError("transcripts file not found: " + transcripts.string());
  const auto stored = read_transcripts(transcripts, true);
  MetricsSummary summary;
  std::vector<MetricsRecord> rows;
  std::vector<std::string> hashes;
  for (const auto& st : stored) {
    if (st.transcript.failed) {
      ++summary.failed_units;
      summary.failed_keys.push_back(unit_key(st.transcript.unit));
      continue;
    }
    try {
      rows.push_back(compute_metrics(st.transcript, {}, cf_epsilon));
    } catch (const std::exception& e) {
      throw ConfigError(transcripts.string() + ":" + std::to_string(st.line) + ": " + e.what());
    }
    hashes.push_back(st.config_hash);
  }
  if (summary.failed_units) {
    std::string list;
    for (const auto& k : summary.failed_keys) list += (list.empty() ? "" : ", ") + k;
    log_warn("excluded " + std::to_string(summary.failed_units) + " failed unit(s): " + list);
  }
  summary.rows = rows.size();
  if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
  write_file_atomic(out_csv, format_metrics_csv(rows, hashes));
  return summary;
}

// ---------------------------------------------------------------------------
// Analyze
// ---------------------------------------------------------------------------

struct AnalysisOutput {
  std::vector<StatResult> comparisons;
  std::vector<ConditionMean> means;
  std::string config_hash;
};

inline std::string comparisons_csv(const std::vector<StatResult>& rows, const std::string& hash) {
  std::string out = detail::join_fields({"comparison", "metric", "delta", "p_raw", "p_holm", "ci_low", "ci_high",
                                         "n_pairs", "n_dropped", "config_hash"});
  for (const auto& r : rows)
    out += detail::join_fields({r.comparison.label(), std::string(to_string(r.metric)), detail::opt_cell(r.delta),
                                detail::opt_cell(r.p_raw), detail::opt_cell(r.p_holm), detail::opt_cell(r.ci_low),
                                detail::opt_cell(r.ci_high), std::to_string(r.n_pairs),
                                std::to_string(r.n_dropped), hash});
  return out;
}

inline std::string means_csv(const std::vector<ConditionMean>& rows, const std::string& hash) {
  std::string out = detail::join_fields(
      {"condition", "protocol", "metric", "mean", "ci_low", "ci_high", "n", "n_missing", "config_hash"});
  for (const auto& r : rows)
    out += detail::join_fields({std::string(long_name(r.protocol)), std::string(to_string(r.protocol)),
                                std::string(long_name(r.metric)), detail::opt_cell(r.mean),
                                detail::opt_cell(r.ci_low), detail::opt_cell(r.ci_high), std::to_string(r.n),
                                std::to_string(r.n_missing), hash});
  return out;
}

inline json plot_data(const AnalysisOutput& a, double level) {
  auto num = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json means = json::array();
  for (const auto& m : a.means)
    means.push_back({{"protocol", to_string(m.protocol)},
                     {"metric", to_string(m.metric)},
                     {"mean", num(m.mean)},
                     {"ci", {num(m.ci_low), num(m.ci_high)}},
                     {"n", m.n}});
  json comps = json::array();
  for (const auto& c : a.comparisons)
    comps.push_back({{"comparison", c.comparison.label()},
                     {"metric", to_string(c.metric)},
                     {"delta", num(c.delta)},
                     {"p_raw", num(c.p_raw)},
                     {"p_holm", num(c.p_holm)},
                     {"ci", {num(c.ci_low), num(c.ci_high)}},
                     {"n_pairs", c.n_pairs}});
  return {{"config_hash", a.config_hash}, {"level", level}, {"means", means}, {"comparisons", comps}};
}

/// Writes comparisons.csv, means.csv and plotdata.json into `out_dir`.
inline AnalysisOutput cmd_analyze(const fs::path& metrics_csv, const fs::path& out_dir,
                                  const ExperimentConfig& cfg) {
  const MetricsTable table = load_metrics_csv(metrics_csv);
  if (table.rows.empty()) throw ConfigError("metrics table is empty: " + metrics_csv.string());
  if (table.config_hashes.size() > 1 && !cfg.allow_mixed_hashes)
    throw ConfigError("metrics table mixes " + std::to_string(table.config_hashes.size()) +
                      " config hashes; pass --allow-mixed-hashes to analyze anyway");

  AnalysisOutput out;
  for (const auto& h : table.config_hashes) out.config_hash += (out.config_hash.empty() ? "" : "+") + h;
  AnalysisConfig acfg = cfg.analysis;
  acfg.master_seed = cfg.master_seed;

  const auto present = protocols_present(table.rows);
  std::vector<Comparison> comparisons;
  if (cfg.comparisons.empty()) {
    for (const auto& c : default_comparisons())
      if (present.count(c.a) && present.count(c.b)) comparisons.push_back(c);
  } else {
    for (const auto& c : cfg.comparisons)
      if (!present.count(c.a) || !present.count(c.b))
        throw ConfigError("comparison " + c.label() + ": metrics table has no rows for " +
                          std::string(to_string(present.count(c.a) ? c.b : c.a)));
    comparisons = cfg.comparisons;
  }
  out.comparisons = family_analysis(table.rows, comparisons, acfg);
  out.means = condition_means(table.rows, acfg);

  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "comparisons.csv", comparisons_csv(out.comparisons, out.config_hash));
  write_file_atomic(out_dir / "means.csv", means_csv(out.means, out.config_hash));
  write_file_atomic(out_dir / "plotdata.json", plot_data(out, acfg.level).dump(2) + "\n");
  return out;
}

// ---------------------------------------------------------------------------
// Judge validation
// ---------------------------------------------------------------------------

inline std::vector<ValidationPair> load_validation_pairs(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("judge pairs file not found: " + path.string());
  const auto j = json::parse(read_file_bytes(path), nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw ConfigError(path.string() + ": expected a JSON list of pairs");
  std::vector<ValidationPair> pairs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    auto field = [&](const char* key) {
      if (!p.is_object() || !p.contains(key) || !p[key].is_string() || trim(p[key].get<std::string>()).empty())
        throw ConfigError(path.string() + ": pair " + std::to_string(i + 1) + " needs a non-empty '" + key + "'");
      return p[key].get<std::string>();
    };
    pairs.push_back({field("event"), field("relevant"), field("irrelevant")});
  }
  if (pairs.empty()) throw ConfigError(path.string() + ": no judge validation pairs");
  return pairs;
}

inline JudgeValidation cmd_validate_judge(const ExperimentConfig& cfg) {
  const auto pairs = load_validation_pairs(cfg.judge_pairs);
  if (!cfg.scripted && cfg.judge_model_id().empty()) throw ConfigError("live mode needs a judge model id");
  const JudgeConfig judge = make_judge(cfg, PromptTemplates::load(cfg.templates_dir));
  RandomStream rng = derive_stream(cfg.master_seed, {"judge-validation"});
  return validate_judge(judge, pairs, cfg.judge_margin, rng);
}

}  // namespace debate
