#pragma once

// Greedy max-min (farthest-point) selection of a diverse event subset from
// precomputed sentence embeddings.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "debate/core.hpp"

namespace debate {

struct EmbeddingTable {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;  // L2-normalised
  std::size_t dimension = 0;

  std::size_t size() const { return ids.size(); }

  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    return std::nullopt;
  }

  /// Appends a vector after validating and normalising it.
  void add(std::string id, std::vector<double> v) {
    if (v.empty()) throw ConfigError("embedding for '" + id + "' is empty");
    if (dimension == 0) dimension = v.size();
    if (v.size() != dimension)
      throw ConfigError("embedding for '" + id + "' has dimension " + std::to_string(v.size()) +
                        ", expected " + std::to_string(dimension));
    double norm = 0;
    for (double x : v) {
      if (!std::isfinite(x)) throw ConfigError("embedding for '" + id + "' has a non-finite component");
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (!(norm > 0)) throw ConfigError("embedding for '" + id + "' has zero norm");
    for (double& x : v) x /= norm;
    if (index_of(id)) throw ConfigError("duplicate embedding id '" + id + "'");
    ids.push_back(std::move(id));
    vectors.push_back(std::move(v));
  }
};

/// Reads embedding JSONL ({"id": ..., "vector": [...]}, one per line). When
/// `known_ids` is given, every row must name one of them.
inline EmbeddingTable load_embeddings(const std::filesystem::path& path,
                                      const std::set<std::string>* known_ids = nullptr) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embeddings file: " + path.string());
  EmbeddingTable table;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError(where + ": invalid JSON");
    if (!j.contains("id") || !j["id"].is_string() || !j.contains("vector") || !j["vector"].is_array())
      throw ConfigError(where + ": expected {\"id\": string, \"vector\": [numbers]}");
    std::string id = j["id"].get<std::string>();
    if (known_ids && !known_ids->count(id)) throw ConfigError(where + ": unknown id '" + id + "'");
    std::vector<double> v;
    for (const auto& x : j["vector"]) {
      // nlohmann parses NaN/Infinity literals as invalid JSON; null stands in for them.
      if (!x.is_number()) throw ConfigError(where + ": embedding for '" + id + "' has a non-finite component");
      v.push_back(x.get<double>());
    }
    try {
      table.add(std::move(id), std::move(v));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (table.size() == 0) throw ConfigError("embeddings file is empty: " + path.string());
  return table;
}

enum class DistanceKind { cosine, euclidean };

inline std::string_view to_string(DistanceKind d) { return d == DistanceKind::cosine ? "cosine" : "euclidean"; }

inline DistanceKind parse_distance(std::string_view s) {
  if (s == "cosine") return DistanceKind::cosine;
  if (s == "euclidean") return DistanceKind::euclidean;
  throw ConfigError("unknown distance '" + std::string(s) + "'");
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b, DistanceKind kind) {
  double acc = 0;
  if (kind == DistanceKind::cosine) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return 1.0 - acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

/// Start element: the vector farthest from the centroid, or a fixed id.
struct StartRule {
  std::optional<std::string> fixed_id;
};

/// Greedy max-min selection. Each step adds the candidate whose minimum
/// distance to the selected set is largest; ties go to the smallest id.
inline std::vector<std::string> max_min_select(const EmbeddingTable& table, std::size_t k,
                                               const StartRule& start = {},
                                               DistanceKind kind = DistanceKind::cosine) {
  const std::size_t n = table.size();
  if (k < 1 || k > n)
    throw ConfigError("subset size k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

  // Scores within this tolerance count as tied.
  constexpr double kTie = 1e-12;
  auto better = [&](double score, std::size_t i, double best, std::size_t best_i) {
    if (score > best + kTie) return true;
    return score >= best - kTie && table.ids[i] < table.ids[best_i];
  };

  std::size_t first = 0;
  if (start.fixed_id) {
    auto idx = table.index_of(*start.fixed_id);
    if (!idx) throw ConfigError("start id '" + *start.fixed_id + "' is not in the embedding table");
    first = *idx;
  } else {
    std::vector<double> centroid(table.dimension, 0.0);
    for (const auto& v : table.vectors)
      for (std::size_t d = 0; d < v.size(); ++d) centroid[d] += v[d] / static_cast<double>(n);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0;
      for (std::size_t d = 0; d < centroid.size(); ++d)
        acc += (table.vectors[i][d] - centroid[d]) * (table.vectors[i][d] - centroid[d]);
      if (i == 0 || better(acc, i, best, first)) best = acc, first = i;
    }
  }

  std::vector<std::string> out{table.ids[first]};
  std::vector<bool> taken(n, false);
  taken[first] = true;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t last = first;
  while (out.size() < k) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      nearest[i] = std::min(nearest[i], distance(table.vectors[i], table.vectors[last], kind));
      if (!pick || better(nearest[i], i, nearest[*pick], *pick)) pick = i;
    }
    taken[*pick] = true;
    last = *pick;
    out.push_back(table.ids[last]);
  }
  return out;
}

/// Minimum pairwise distance within a subset (the max-min objective).
inline double max_min_objective(const EmbeddingTable& table, const std::vector<std::string>& ids,
                                DistanceKind kind = DistanceKind::cosine) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      best = std::min(best, distance(table.vectors[*table.index_of(ids[i])],
                                     table.vectors[*table.index_of(ids[j])], kind));
  return best;
}

}  // namespace debate
