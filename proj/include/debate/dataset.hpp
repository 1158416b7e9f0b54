#pragma once

// Event dataset CSV: header row naming date, value, event and relation-note
// columns (an optional id column; otherwise the month string is the id).

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "debate/core.hpp"
#include "debate/hash.hpp"
#include "debate/text.hpp"

namespace debate {

/// Which header column fed each Event field; recorded in run manifests.
struct DatasetColumns {
  std::optional<std::string> id;
  std::string date;
  std::string value;
  std::string event;
  std::string relation;
};

struct EventDataset {
  std::vector<Event> events;
  DatasetColumns columns;
  std::string sha256;

  const Event* find(std::string_view id) const {
    for (const auto& e : events)
      if (e.id == id) return &e;
    return nullptr;
  }
};

namespace detail {

inline std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                              std::initializer_list<std::string_view> names) {
  for (auto want : names)
    for (std::size_t i = 0; i < header.size(); ++i)
      if (to_lower(trim(header[i])) == want) return i;
  return std::nullopt;
}

}  // namespace detail

inline EventDataset parse_event_dataset(std::string_view bytes, const std::string& origin = "<memory>") {
  std::vector<CsvRecord> rows;
  try {
    rows = parse_csv(bytes);
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (rows.empty()) throw ConfigError(origin + ": missing header row");

  const auto& header = rows.front().fields;
  auto id_col = detail::find_column(header, {"id", "event_id"});
  auto date_col = detail::find_column(header, {"date", "observation_date", "month"});
  auto value_col = detail::find_column(
      header, {"value", "inflation", "inflation_value", "inflation (%)", "corestickm159sfrbatl"});
  auto event_col = detail::find_column(
      header, {"event", "event_text", "major_world_event", "major world event"});
  auto rel_col = detail::find_column(
      header, {"relation_note", "relation", "inflation_relation_confirmed",
               "inflation relation confirmed", "inflation relation confirmed?"});
  if (!date_col || !value_col || !event_col || !rel_col)
    throw ConfigError(origin +
                      ": header must name date, value, event and relation_note columns");

  EventDataset ds;
  ds.sha256 = sha256_hex(bytes);
  ds.columns = {id_col ? std::optional<std::string>(header[*id_col]) : std::nullopt,
                header[*date_col], header[*value_col], header[*event_col], header[*rel_col]};

  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const std::string where = origin + ": row " + std::to_string(r) + " (line " +
                              std::to_string(rows[r].line) + ")";
    if (f.size() != header.size())
      throw ConfigError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(f.size()));
    Event e;
    auto date = YearMonth::parse(trim(f[*date_col]));
    if (!date) throw ConfigError(where + ": date '" + f[*date_col] + "' is not YYYY-MM");
    e.date = *date;
    auto value = parse_double(f[*value_col]);
    if (!value) throw ConfigError(where + ": value '" + f[*value_col] + "' is not a number");
    e.inflation_value = *value;
    e.event_text = f[*event_col];
    if (trim(e.event_text).empty()) throw ConfigError(where + ": empty event text");
    e.relation_note = f[*rel_col];
    e.id = id_col ? std::string(trim(f[*id_col])) : e.date.str();
    if (e.id.empty()) throw ConfigError(where + ": empty id");
    if (!seen.insert(e.id).second) throw ConfigError(where + ": duplicate id '" + e.id + "'");
    ds.events.push_back(std::move(e));
  }
  return ds;
}

inline EventDataset load_event_dataset(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError("event dataset not found: " + path.string());
  return parse_event_dataset(read_file_bytes(path), path.string());
}

/// Writes the canonical four-column layout (plus id when ids differ from dates).
inline std::string format_event_dataset(const std::vector<Event>& events) {
  bool need_id = false;
  for (const auto& e : events) need_id = need_id || e.id != e.date.str();
  std::string out = need_id ? "id,date,value,event,relation_note\n" : "date,value,event,relation_note\n";
  for (const auto& e : events) {
    if (need_id) out += csv_field(e.id) + ",";
    out += e.date.str() + "," + format_double(e.inflation_value) + "," + csv_field(e.event_text) +
           "," + csv_field(e.relation_note) + "\n";
  }
  return out;
}

inline void write_event_dataset(const std::filesystem::path& path, const std::vector<Event>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset: " + path.string());
  out << format_event_dataset(events);
}

}  // namespace debate
