// debate: command-line front end for subset selection, debate runs, metrics and analysis.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "debate/experiment.hpp"
#include "debate/synthetic.hpp"

namespace {

using namespace debate;

struct Options {
  ExperimentConfig cfg;
  std::vector<std::string> protocols;
  std::vector<std::string> comparisons;
  std::string start_id;
  std::string distance = "cosine";
  std::string transcripts;
  std::string metrics;
  bool no_silencing = false;
  bool verbose = false;
  bool quiet = false;
  std::size_t fixture_events = 121;
  std::size_t fixture_dim = 384;
};

void add_options(CLI::App& app, Options& o) {
  auto& c = o.cfg;
  app.set_config("--config", "", "Read options from an INI/TOML key-value file");

  const char* io = "Inputs and outputs";
  app.add_option("--dataset", c.dataset, "Event CSV")->group(io);
  app.add_option("--embeddings", c.embeddings, "Embedding JSONL written by the embed-export tool")->group(io);
  app.add_option("--out", c.output_dir, "Experiment output directory")->capture_default_str()->group(io);
  app.add_option("--subset", c.subset_file, "Subset manifest (default <out>/subset.json)")->group(io);
  app.add_option("--templates", c.templates_dir, "Directory with system.txt, format.txt, rubric.txt")->group(io);
  app.add_option("--transcripts", o.transcripts, "Transcript JSONL (default <out>/transcripts.jsonl)")->group(io);
  app.add_option("--metrics", o.metrics, "Metrics CSV (default <out>/metrics.csv)")->group(io);
  app.add_option("--pairs", c.judge_pairs, "Judge validation pairs JSON")->group(io);

  const char* sel = "Selection";
  app.add_option("-k,--subset-k", c.subset_k, "Events to select")->capture_default_str()->group(sel);
  app.add_option("--start-id", o.start_id, "Start selection from this event id")->group(sel);
  app.add_option("--distance", o.distance, "cosine or euclidean")
      ->check(CLI::IsMember({"cosine", "euclidean"}))
      ->capture_default_str()
      ->group(sel);

  const char* grid = "Experiment grid";
  app.add_option("--seeds", c.seeds, "Seeds per event")->capture_default_str()->group(grid);
  app.add_option("--protocols", o.protocols, "Protocols to run (WR,CR,RA-CR,NI)")->delimiter(',')->group(grid);
  app.add_option("--rounds", c.rounds, "Debate rounds")->capture_default_str()->group(grid);
  app.add_option("--candidates", c.candidates, "Best-of-N candidates per turn")->capture_default_str()->group(grid);
  app.add_flag("--no-silencing", o.no_silencing, "Disable RA-CR silencing")->group(grid);
  app.add_option("--master-seed", c.master_seed, "Master seed")->capture_default_str()->group(grid);
  app.add_option("--workers", c.workers, "Concurrent units (0: min(cores, 4))")->capture_default_str()->group(grid);

  const char* model = "Models";
  app.add_flag("--scripted", c.scripted, "Use deterministic scripted agents and judge")->group(model);
  app.add_option("--agent-models", c.agent_models, "Model ids for Agent A, B, C")
      ->delimiter(',')
      ->expected(0, 3)
      ->group(model);
  app.add_option("--judge-model", c.judge_model, "Judge model id")->group(model);
  app.add_option("--endpoint", c.endpoint_url, "Chat-completion endpoint URL")
      ->envname("DEBATE_ENDPOINT")
      ->capture_default_str()
      ->group(model);
  app.add_option("--judge-endpoint", c.judge_endpoint_url, "Judge endpoint (default: --endpoint)")->group(model);
  app.add_option("--timeout-ms", c.timeout_ms, "Per-request timeout")->capture_default_str()->group(model);
  app.add_option("--retries", c.retries, "Retries after a failed request")->capture_default_str()->group(model);
  app.add_option("--judge-parse-retries", c.judge_parse_retries, "Re-asks after an unparseable judge reply")
      ->capture_default_str()
      ->group(model);

  const char* dec = "Decoding and scheduling";
  app.add_option("--temperature", c.decoding.base_temperature, "Base temperature")->capture_default_str()->group(dec);
  app.add_option("--jitter-step", c.decoding.jitter_step, "Best-of-N temperature step")
      ->capture_default_str()
      ->group(dec);
  app.add_flag("--zero-based-jitter", c.decoding.zero_based_jitter, "Index candidates from 0 in the jitter formula")
      ->group(dec);
  app.add_option("--max-tokens", c.decoding.max_tokens, "Max output tokens")->capture_default_str()->group(dec);
  app.add_option("--order-temperature", c.order_temperature, "RA-CR ordering temperature")
      ->capture_default_str()
      ->group(dec);
  app.add_option("--cf-epsilon", c.cf_epsilon, "Near-zero variance threshold for CF")
      ->capture_default_str()
      ->group(dec);

  const char* st = "Statistics";
  app.add_option("--level", c.analysis.level, "Confidence level")->capture_default_str()->group(st);
  app.add_option("--bootstrap-resamples", c.analysis.bootstrap_resamples, "Bootstrap resamples")
      ->capture_default_str()
      ->group(st);
  app.add_option("--permutation-resamples", c.analysis.permutation_resamples, "Random sign flips when n > 20")
      ->capture_default_str()
      ->group(st);
  app.add_option("--comparisons", o.comparisons, "Protocol pairs such as WR:RA-CR")->delimiter(',')->group(st);
  app.add_flag("--allow-mixed-hashes", c.allow_mixed_hashes, "Analyze metrics from different configs")->group(st);
  app.add_flag("--allow-partial-coverage", c.analysis.allow_partial_coverage,
               "Drop units missing under one protocol instead of failing")
      ->group(st);
  app.add_option("--margin", c.judge_margin, "Judge validation margin")->capture_default_str()->group(st);

  app.add_flag("-v,--verbose", o.verbose, "Progress logging");
  app.add_flag("-q,--quiet", o.quiet, "Errors only");
}

void finalize(Options& o) {
  auto& c = o.cfg;
  if (!o.protocols.empty()) {
    c.protocols.clear();
    for (const auto& p : o.protocols) c.protocols.push_back(parse_protocol(p));
  }
  for (const auto& s : o.comparisons) c.comparisons.push_back(parse_comparison(s));
  if (!o.start_id.empty()) c.start_id = o.start_id;
  c.distance = parse_distance(o.distance);
  c.silencing = !o.no_silencing;
  if (o.verbose) log_level() = LogLevel::info;
  if (o.quiet) log_level() = LogLevel::quiet;
}

std::string fmt(const std::optional<double>& v, const char* spec = "%.3f") {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent debate protocol experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  add_options(app, o);

  auto* select = app.add_subcommand("select", "Pick a diverse event subset from embeddings");
  auto* run = app.add_subcommand("run", "Run the protocol x event x seed grid (resumable)");
  auto* metrics = app.add_subcommand("metrics", "Compute PRR, AD and CF for every transcript");
  auto* analyze = app.add_subcommand("analyze", "Paired tests and condition means");
  auto* validate = app.add_subcommand("validate-judge", "Check the judge prefers relevant comments");
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic dataset and embeddings to --out");
  fixture->add_option("--events", o.fixture_events, "Number of events")->capture_default_str();
  fixture->add_option("--dim", o.fixture_dim, "Embedding dimension")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    finalize(o);
    auto& c = o.cfg;
    const fs::path transcripts = o.transcripts.empty() ? c.transcripts_path() : fs::path(o.transcripts);
    const fs::path metrics_csv = o.metrics.empty() ? c.metrics_path() : fs::path(o.metrics);

    if (*select) {
      const auto s = cmd_select(c);
      std::cout << "selected " << s.ids.size() << " events -> " << c.subset_path().string() << "\n";
      for (const auto& id : s.ids) std::cout << "  " << id << "\n";
      return kExitOk;
    }
    if (*run) {
      const auto s = cmd_run(c);
      std::cout << "units: " << s.total << " total, " << s.executed << " executed, " << s.skipped
                << " already complete, " << s.failed << " failed\n";
      for (const auto& [kind, n] : s.failures_by_kind) std::cout << "  " << kind << ": " << n << "\n";
      std::cout << "config hash " << s.config_hash << "; transcripts -> " << c.transcripts_path().string() << "\n";
      return s.failed ? kExitUnitFailures : kExitOk;
    }
    if (*metrics) {
      const auto s = cmd_metrics(transcripts, metrics_csv, c.cf_epsilon);
      std::cout << s.rows << " metrics rows -> " << metrics_csv.string() << " (" << s.failed_units
                << " failed units excluded)\n";
      return kExitOk;
    }
    if (*analyze) {
      const auto a = cmd_analyze(metrics_csv, c.output_dir, c);
      std::cout << "Condition means\n";
      for (const auto& m : a.means)
        std::cout << "  " << to_string(m.protocol) << "\t" << to_string(m.metric) << "\t" << fmt(m.mean) << " ["
                  << fmt(m.ci_low) << ", " << fmt(m.ci_high) << "]  n=" << m.n << "\n";
      if (!a.comparisons.empty()) std::cout << "Paired comparisons (Holm-adjusted)\n";
      for (const auto& r : a.comparisons)
        std::cout << "  " << r.comparison.label() << "\t" << to_string(r.metric) << "\tdelta "
                  << fmt(r.delta, "%+.3f") << "\tp_holm " << fmt(r.p_holm, "%.4f") << "\n";
      std::cout << "tables -> " << c.output_dir.string() << "\n";
      return kExitOk;
    }
    if (*validate) {
      const auto v = cmd_validate_judge(c);
      for (std::size_t i = 0; i < v.pairs.size(); ++i) {
        const auto& p = v.pairs[i];
        auto s = [](const std::optional<JudgeScore>& x) { return x ? fmt(x->normalized, "%.2f") : "missing"; };
        std::cout << "pair " << i + 1 << ": relevant " << s(p.relevant) << ", irrelevant " << s(p.irrelevant)
                  << (p.correct ? "  ok" : "  FAIL") << "\n";
      }
      std::cout << "strict pairwise accuracy " << fmt(v.accuracy, "%.2f") << " (" << v.correct << "/"
                << v.pairs.size() << ", margin " << fmt(c.judge_margin, "%.2f") << ")\n";
      return kExitOk;
    }
    if (*fixture) {
      synthetic::write_fixture(c.output_dir, o.fixture_events, o.fixture_dim, c.master_seed + 7);
      std::cout << "wrote " << (c.output_dir / "events.csv").string() << " and "
                << (c.output_dir / "embeddings.jsonl").string() << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const UnitError& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitUnitFailures;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
