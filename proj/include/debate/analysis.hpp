#pragma once

// Paired comparison families and condition means over a metrics table.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "debate/metrics.hpp"
#include "debate/stats.hpp"

namespace debate {

enum class Metric { PRR, AD, CF };

inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::PRR, Metric::AD, Metric::CF};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::PRR: return "PRR";
    case Metric::AD: return "AD";
    case Metric::CF: return "CF";
  }
  return "?";
}

inline std::string_view long_name(Metric m) {
  switch (m) {
    case Metric::PRR: return "Peer Reference Rate";
    case Metric::AD: return "Argument Diversity";
    case Metric::CF: return "Consensus Formation";
  }
  return "?";
}

inline std::optional<double> metric_value(const MetricsRecord& r, Metric m) {
  switch (m) {
    case Metric::PRR: return r.prr;
    case Metric::AD: return r.ad;
    case Metric::CF: return r.cf;
  }
  return std::nullopt;
}

/// PRR is not defined without peer visibility.
inline bool metric_applies(Metric m, ProtocolKind p) { return m != Metric::PRR || p != ProtocolKind::NI; }

struct Comparison {
  ProtocolKind a;
  ProtocolKind b;

  std::string label() const { return std::string(to_string(a)) + " vs " + std::string(to_string(b)); }
  bool operator==(const Comparison&) const = default;
};

inline const std::vector<Comparison>& default_comparisons() {
  using P = ProtocolKind;
  static const std::vector<Comparison> c = {{P::WR, P::RA_CR}, {P::WR, P::CR},    {P::CR, P::RA_CR},
                                            {P::WR, P::NI},    {P::CR, P::NI},    {P::RA_CR, P::NI}};
  return c;
}

/// Parses "WR:RA-CR" (or "WR vs RA-CR").
inline Comparison parse_comparison(std::string_view s) {
  std::string_view left, right;
  if (auto vs = s.find(" vs "); vs != std::string_view::npos) {
    left = s.substr(0, vs);
    right = s.substr(vs + 4);
  } else if (auto colon = s.find(':'); colon != std::string_view::npos) {
    left = s.substr(0, colon);
    right = s.substr(colon + 1);
  } else {
    throw ConfigError("comparison '" + std::string(s) + "' must look like A:B");
  }
  Comparison c{parse_protocol(trim(left)), parse_protocol(trim(right))};
  if (c.a == c.b) throw ConfigError("comparison '" + std::string(s) + "' compares a protocol with itself");
  return c;
}

struct AnalysisConfig {
  double level = 0.95;
  int bootstrap_resamples = kDefaultResamples;
  int permutation_resamples = kDefaultResamples;
  std::uint64_t master_seed = 0;
  /// Drop units present under only one protocol instead of rejecting the table.
  bool allow_partial_coverage = false;
};

struct StatResult {
  Comparison comparison;
  Metric metric = Metric::AD;
  std::optional<double> delta;  // mean(a - b); nullopt when no complete pairs remain
  std::optional<double> p_raw;
  std::optional<double> p_holm;
  std::optional<double> ci_low;  // bootstrap interval of the paired differences
  std::optional<double> ci_high;
  std::size_t n_pairs = 0;
  std::size_t n_dropped = 0;  // units with a missing value on either side
};

struct ConditionMean {
  ProtocolKind protocol;
  Metric metric;
  std::optional<double> mean;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t n = 0;
  std::size_t n_missing = 0;
};

using UnitLabel = std::pair<std::string, int>;

/// Metrics rows of one protocol keyed by (event_id, seed_index).
inline std::map<UnitLabel, const MetricsRecord*> index_by_unit(const std::vector<MetricsRecord>& records,
                                                              ProtocolKind p) {
  std::map<UnitLabel, const MetricsRecord*> out;
  for (const auto& r : records) {
    if (r.unit.protocol != p) continue;
    if (!out.emplace(UnitLabel{r.unit.event_id, r.unit.seed_index}, &r).second)
      throw ConfigError("duplicate metrics row for " + unit_key(r.unit));
  }
  return out;
}

inline std::set<ProtocolKind> protocols_present(const std::vector<MetricsRecord>& records) {
  std::set<ProtocolKind> out;
  for (const auto& r : records) out.insert(r.unit.protocol);
  return out;
}

/// Paired tests for each comparison, Holm-adjusted within each comparison's
/// metric family (PRR is left out of NI contrasts).
inline std::vector<StatResult> family_analysis(const std::vector<MetricsRecord>& records,
                                               const std::vector<Comparison>& comparisons,
                                               const AnalysisConfig& cfg = {}) {
  std::vector<StatResult> out;
  for (const auto& cmp : comparisons) {
    const auto ia = index_by_unit(records, cmp.a);
    const auto ib = index_by_unit(records, cmp.b);
    if (ia.empty() || ib.empty())
      throw ConfigError("comparison " + cmp.label() + ": no metrics rows for " +
                        std::string(to_string(ia.empty() ? cmp.a : cmp.b)));

    std::size_t unmatched = 0;
    for (const auto& [label, _] : ia) unmatched += ib.count(label) ? 0 : 1;
    for (const auto& [label, _] : ib) unmatched += ia.count(label) ? 0 : 1;
    if (unmatched && !cfg.allow_partial_coverage)
      throw ConfigError("comparison " + cmp.label() + ": mismatched unit coverage (" +
                        std::to_string(unmatched) + " units present under only one protocol)");

    const std::size_t first = out.size();
    for (Metric m : kAllMetrics) {
      if (!metric_applies(m, cmp.a) || !metric_applies(m, cmp.b)) continue;
      StatResult res;
      res.comparison = cmp;
      res.metric = m;
      res.n_dropped = unmatched;
      PairedSample sample;
      for (const auto& [label, ra] : ia) {
        auto it = ib.find(label);
        if (it == ib.end()) continue;
        auto va = metric_value(*ra, m);
        auto vb = metric_value(*it->second, m);
        if (!va || !vb) {
          ++res.n_dropped;
          continue;
        }
        sample.labels.push_back(label);
        sample.values_a.push_back(*va);
        sample.values_b.push_back(*vb);
      }
      res.n_pairs = sample.size();
      if (res.n_pairs > 0) {
        const std::string a(to_string(cmp.a)), b(to_string(cmp.b)), metric(to_string(m));
        RandomStream perm = derive_stream(cfg.master_seed, {"analysis", "permutation", a, b, metric});
        RandomStream boot = derive_stream(cfg.master_seed, {"analysis", "bootstrap", a, b, metric});
        const auto d = sample.differences();
        res.delta = mean_of(d);
        res.p_raw = paired_permutation_test(sample, cfg.permutation_resamples, perm);
        const auto ci = bootstrap_ci(d, cfg.level, cfg.bootstrap_resamples, boot);
        res.ci_low = ci.low;
        res.ci_high = ci.high;
      }
      out.push_back(res);
    }

    std::vector<double> raw;
    std::vector<std::size_t> where;
    for (std::size_t i = first; i < out.size(); ++i)
      if (out[i].p_raw) raw.push_back(*out[i].p_raw), where.push_back(i);
    const auto adj = holm_bonferroni(raw);
    for (std::size_t k = 0; k < adj.size(); ++k) out[where[k]].p_holm = adj[k];
  }
  return out;
}

/// Per-protocol metric means with bootstrap intervals, metric-major in the
/// canonical protocol order; PRR rows are omitted for NI.
inline std::vector<ConditionMean> condition_means(const std::vector<MetricsRecord>& records,
                                                  const AnalysisConfig& cfg = {}) {
  if (records.empty()) throw ConfigError("metrics table is empty");
  const auto present = protocols_present(records);
  std::vector<ConditionMean> out;
  for (Metric m : kAllMetrics) {
    for (ProtocolKind p : kAllProtocols) {
      if (!present.count(p) || !metric_applies(m, p)) continue;
      ConditionMean row{p, m, std::nullopt, std::nullopt, std::nullopt, 0, 0};
      std::vector<double> values;
      for (const auto& r : records) {
        if (r.unit.protocol != p) continue;
        if (auto v = metric_value(r, m)) values.push_back(*v);
        else ++row.n_missing;
      }
      row.n = values.size();
      if (!values.empty()) {
        RandomStream boot = derive_stream(cfg.master_seed,
                                          {"analysis", "means", to_string(p), to_string(m)});
        row.mean = mean_of(values);
        const auto ci = bootstrap_ci(values, cfg.level, cfg.bootstrap_resamples, boot);
        row.ci_low = ci.low;
        row.ci_high = ci.high;
      }
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace debate
