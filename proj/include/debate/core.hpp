#pragma once

// Domain types shared by every stage of a debate experiment.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace debate {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Category attached to a failed run unit.
enum class FailureKind { transport, timeout, empty_output, protocol, config };

inline std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::transport: return "transport";
    case FailureKind::timeout: return "timeout";
    case FailureKind::empty_output: return "empty_output";
    case FailureKind::protocol: return "protocol";
    case FailureKind::config: return "config";
  }
  return "unknown";
}

inline FailureKind parse_failure_kind(std::string_view s) {
  for (auto k : {FailureKind::transport, FailureKind::timeout, FailureKind::empty_output,
                 FailureKind::protocol, FailureKind::config})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown failure kind: " + std::string(s));
}

/// Any error that marks a run unit as failed.
class UnitError : public std::runtime_error {
 public:
  UnitError(FailureKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  FailureKind kind() const noexcept { return kind_; }

 private:
  FailureKind kind_;
};

/// Raised for malformed inputs and configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Protocols
// ---------------------------------------------------------------------------

enum class ProtocolKind { WR, CR, RA_CR, NI };

inline constexpr std::array<ProtocolKind, 4> kAllProtocols = {
    ProtocolKind::WR, ProtocolKind::CR, ProtocolKind::RA_CR, ProtocolKind::NI};

inline std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::WR: return "WR";
    case ProtocolKind::CR: return "CR";
    case ProtocolKind::RA_CR: return "RA-CR";
    case ProtocolKind::NI: return "NI";
  }
  return "?";
}

inline std::string_view long_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::WR: return "Within-Round";
    case ProtocolKind::CR: return "Cross-Round";
    case ProtocolKind::RA_CR: return "Rank-Adaptive Cross-Round";
    case ProtocolKind::NI: return "No-Interaction";
  }
  return "?";
}

inline ProtocolKind parse_protocol(std::string_view s) {
  for (auto k : kAllProtocols)
    if (to_string(k) == s) return k;
  if (s == "RA_CR" || s == "RACR") return ProtocolKind::RA_CR;
  throw ConfigError("unknown protocol: '" + std::string(s) + "' (expected WR, CR, RA-CR or NI)");
}

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::WR;
  int rounds = 2;
  bool silencing_enabled = false;  // RA-CR only
  int candidates_per_turn = 2;

  /// Default spec for a protocol kind; RA-CR runs with silencing on.
  static ProtocolSpec defaults(ProtocolKind kind) {
    ProtocolSpec spec;
    spec.kind = kind;
    spec.silencing_enabled = kind == ProtocolKind::RA_CR;
    return spec;
  }

  void validate() const {
    if (rounds < 1) throw ConfigError("protocol rounds must be >= 1");
    if (candidates_per_turn < 1) throw ConfigError("candidates_per_turn must be >= 1");
    if (silencing_enabled && kind != ProtocolKind::RA_CR)
      throw ConfigError("silencing is only meaningful for RA-CR");
  }

  bool operator==(const ProtocolSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Agents and runs
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 3> kPeerNames = {"Agent A", "Agent B", "Agent C"};

struct AgentRole {
  std::string name;
  std::string model_id;

  bool operator==(const AgentRole&) const = default;
};

/// Checks the three-agent roster: distinct names from the fixed peer set.
inline void validate_roster(const std::vector<AgentRole>& roles) {
  if (roles.size() != kPeerNames.size())
    throw ConfigError("a debate needs exactly three agent roles");
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (std::find(kPeerNames.begin(), kPeerNames.end(), roles[i].name) == kPeerNames.end())
      throw ConfigError("agent role '" + roles[i].name + "' is not in the peer set");
    for (std::size_t j = 0; j < i; ++j)
      if (roles[j].name == roles[i].name)
        throw ConfigError("duplicate agent role '" + roles[i].name + "'");
  }
}

struct RunUnit {
  std::string event_id;
  int seed_index = 0;
  ProtocolKind protocol = ProtocolKind::WR;
  std::uint64_t master_seed = 0;

  bool operator==(const RunUnit&) const = default;
};

/// Identity of a unit within an experiment grid (master seed is experiment-wide).
inline std::string unit_key(const RunUnit& u) {
  return std::string(to_string(u.protocol)) + "|" + u.event_id + "|" + std::to_string(u.seed_index);
}

struct DecodingParams {
  double base_temperature = 0.4;
  double jitter_step = 0.15;
  int max_tokens = 512;
  /// Index candidates from 0 instead of 1 in the jitter formula (centres N=2 on tau).
  bool zero_based_jitter = false;

  void validate() const {
    if (base_temperature < 0) throw ConfigError("base temperature must be >= 0");
    if (jitter_step < 0) throw ConfigError("jitter step must be >= 0");
    if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

struct YearMonth {
  int year = 0;
  int month = 0;

  /// Accepts "YYYY-MM" and "YYYY-MM-DD" (the day is discarded).
  static std::optional<YearMonth> parse(std::string_view s) {
    if (s.size() != 7 && s.size() != 10) return std::nullopt;
    if (s[4] != '-' || (s.size() == 10 && s[7] != '-')) return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
      int v = 0;
      auto sub = s.substr(pos, len);
      if (!std::all_of(sub.begin(), sub.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      std::from_chars(sub.data(), sub.data() + sub.size(), v);
      return v;
    };
    auto y = num(0, 4), m = num(5, 2);
    if (!y || !m || *m < 1 || *m > 12) return std::nullopt;
    if (s.size() == 10) {
      auto d = num(8, 2);
      if (!d || *d < 1 || *d > 31) return std::nullopt;
    }
    return YearMonth{*y, *m};
  }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }

  auto operator<=>(const YearMonth&) const = default;
};

struct Event {
  std::string id;
  YearMonth date;
  double inflation_value = 0.0;
  std::string event_text;
  std::string relation_note;

  bool operator==(const Event&) const = default;
};

}  // namespace debate
