#pragma once

// Synthetic event datasets and embedding files for tests and dry runs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "debate/dataset.hpp"
#include "debate/random.hpp"
#include "debate/text.hpp"

namespace debate::synthetic {

/// `count` monthly events starting at `start`, with annotation text drawn
/// from a small topic vocabulary.
inline std::vector<Event> make_events(std::size_t count, std::uint64_t seed = 7, YearMonth start = {2016, 1}) {
  static const std::vector<std::string> actors = {
      "The Federal Reserve", "OPEC", "The European Central Bank", "China", "A major hurricane",
      "Congress", "The World Health Organization", "Port workers", "A drought", "The Bank of Japan"};
  static const std::vector<std::string> actions = {
      "raises interest rates", "cuts oil production", "announces new tariffs on imports",
      "declares a public health emergency", "disrupts shipping through key ports",
      "passes a large fiscal stimulus package", "triggers a sharp currency depreciation",
      "halts semiconductor exports", "reduces grain harvests", "expands asset purchases"};
  static const std::vector<std::string> contexts = {
      "amid persistent wage growth", "as supply chains remain strained", "while housing costs climb",
      "during a slowdown in manufacturing", "after a surge in consumer demand", "as energy prices fall"};
  static const std::vector<std::string> notes = {
      "No confirmed correlation with sticky price movements.",
      "Plausible lagged pass-through to services prices.",
      "Minimal; energy is excluded from this index.",
      "Confirmed upward pressure on shelter and services.",
      "Indirect effect through import prices."};
  RandomStream rng = derive_stream(seed, {"synthetic-events"});
  std::vector<Event> events;
  YearMonth ym = start;
  double value = 2.5;
  for (std::size_t i = 0; i < count; ++i) {
    Event e;
    e.date = ym;
    e.id = ym.str();
    value = std::round((value + (rng.uniform() - 0.5) * 0.3) * 100.0) / 100.0;
    e.inflation_value = value;
    e.event_text = actors[rng.below(actors.size())] + " " + actions[rng.below(actions.size())] + " " +
                   contexts[rng.below(contexts.size())] + ".";
    e.relation_note = notes[rng.below(notes.size())];
    events.push_back(std::move(e));
    if (++ym.month > 12) ym.month = 1, ++ym.year;
  }
  return events;
}

/// Deterministic pseudo-embeddings: a few shared cluster directions plus
/// per-event noise, so max-min selection has structure to find.
inline std::vector<std::vector<double>> make_vectors(std::size_t count, std::size_t dim,
                                                     std::uint64_t seed = 11, std::size_t clusters = 6) {
  RandomStream rng = derive_stream(seed, {"synthetic-embeddings"});
  auto gaussian = [&] {
    const double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  };
  std::vector<std::vector<double>> centers(clusters, std::vector<double>(dim));
  for (auto& c : centers)
    for (auto& x : c) x = gaussian();
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = centers[rng.below(clusters)];
    std::vector<double> v(dim);
    for (std::size_t d = 0; d < dim; ++d) v[d] = c[d] + 0.7 * gaussian();
    out.push_back(std::move(v));
  }
  return out;
}

inline std::string embeddings_jsonl(const std::vector<std::string>& ids,
                                    const std::vector<std::vector<double>>& vectors) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    out += nlohmann::json{{"id", ids[i]}, {"vector", vectors[i]}}.dump() + "\n";
  return out;
}

/// Writes <dir>/events.csv and <dir>/embeddings.jsonl.
inline void write_fixture(const std::filesystem::path& dir, std::size_t count, std::size_t dim,
                          std::uint64_t seed = 7) {
  std::filesystem::create_directories(dir);
  const auto events = make_events(count, seed);
  write_event_dataset(dir / "events.csv", events);
  std::vector<std::string> ids;
  for (const auto& e : events) ids.push_back(e.id);
  std::ofstream out(dir / "embeddings.jsonl", std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (dir / "embeddings.jsonl").string());
  out << embeddings_jsonl(ids, make_vectors(count, dim, seed + 4));
}

}  // namespace debate::synthetic
