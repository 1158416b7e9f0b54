#pragma once

// Deterministic stand-ins for model backends. Their outputs are pure functions
// of (request, script parameters, stream draw), which makes PRR, AD and CF
// predictable and lets whole experiment grids replay byte-for-byte.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "debate/agents.hpp"
#include "debate/forecast.hpp"

namespace debate {

/// Adapts a callable into a Backend.
class FunctionBackend final : public Backend {
 public:
  using Fn = std::function<std::string(const ChatRequest&, RandomStream&)>;

  FunctionBackend(std::string model_id, Fn fn) : model_id_(std::move(model_id)), fn_(std::move(fn)) {}

  std::string complete(const ChatRequest& req, RandomStream& rng) const override { return fn_(req, rng); }
  std::string model_id() const override { return model_id_; }

 private:
  std::string model_id_;
  Fn fn_;
};

/// Text between the <response> markers of a judge request.
inline std::string judged_response(const ChatRequest& req) {
  const std::string& user = req.messages.back().content;
  const auto open = user.find("<response>\n");
  const auto close = user.rfind("\n</response>");
  if (open == std::string::npos || close == std::string::npos || close < open + 11) return {};
  return user.substr(open + 11, close - open - 11);
}

/// Turn marker "<<S:A:2:01234567>>" carrying speaker letter and round. It has
/// no alphabetic run of length >= 3, so it never enters AD token sets.
inline std::string sentinel_for(std::string_view role, int round, std::uint64_t nonce) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "<<S:%c:%d:%08llu>>", role.empty() ? '?' : role.back(), round,
                static_cast<unsigned long long>(nonce % 100000000ULL));
  return buf;
}

struct Sentinel {
  char role_letter;
  int round;
};

inline std::vector<Sentinel> find_sentinels(std::string_view text) {
  std::vector<Sentinel> out;
  for (auto pos = text.find("<<S:"); pos != std::string_view::npos; pos = text.find("<<S:", pos + 1)) {
    if (pos + 7 >= text.size()) break;
    out.push_back({text[pos + 4], std::atoi(std::string(text.substr(pos + 6, 4)).c_str())});
  }
  return out;
}

struct ScriptParams {
  /// Fixed forecasts per role, indexed by round - 1. Overrides the dynamics below.
  std::map<std::string, std::vector<double>> forecast_table;
  /// Half-width of the uniform spread of independent forecasts.
  double forecast_spread = 1.0;
  /// Fraction of the gap to the visible peer mean closed in later rounds.
  double peer_pull = 0.6;
  /// Chance that a turn with visible peers references one of them.
  double reference_probability = 0.5;
  /// If non-empty, every turn appends this phrase instead of a sampled reference.
  std::string reference_phrase;
  /// Per-role filler vocabulary; roles without an entry use the defaults.
  std::map<std::string, std::vector<std::string>> filler;
  int filler_words = 14;
  bool include_impact_line = true;
  bool emit_sentinels = false;
  /// Chance that a turn omits its forecast entirely.
  double missing_forecast_probability = 0.0;
};

namespace detail {

inline const std::vector<std::string>& default_filler(std::string_view role) {
  static const std::vector<std::string> shared = {
      "inflation", "prices", "demand", "supply", "wages", "costs", "services", "goods",
      "policy", "expectations", "pressure", "sticky", "shipping", "energy", "housing", "rents"};
  static const std::map<std::string, std::vector<std::string>, std::less<>> by_role = {
      {"Agent A", {"tariffs", "freight", "logistics", "imports", "margins", "retailers", "ports",
                   "container", "sourcing", "inventory", "weather", "holiday", "anecdote"}},
      {"Agent B", {"labor", "payrolls", "hiring", "contracts", "unions", "productivity", "migration",
                   "participation", "overtime", "staffing", "sports", "festival", "gossip"}},
      {"Agent C", {"monetary", "balance", "sheet", "liquidity", "credit", "lending", "mortgages",
                   "spreads", "treasury", "yields", "movies", "gardening", "travel"}},
  };
  static const std::vector<std::string> fallback = shared;
  static std::map<std::string, std::vector<std::string>, std::less<>> merged = [] {
    std::map<std::string, std::vector<std::string>, std::less<>> m;
    for (const auto& [role, words] : by_role) {
      auto v = words;
      v.insert(v.end(), shared.begin(), shared.end());
      m.emplace(role, std::move(v));
    }
    return m;
  }();
  auto it = merged.find(role);
  return it == merged.end() ? fallback : it->second;
}

inline std::string format_impact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "Impact: %+.1f%%", v);
  return buf;
}

inline double role_bias(std::string_view role) {
  if (role == "Agent A") return 0.4;
  if (role == "Agent B") return -0.3;
  if (role == "Agent C") return 0.1;
  return 0.0;
}

}  // namespace detail

/// Scripted debater. Forecast dynamics: round-1 and isolated turns draw
/// independently around an event baseline; turns that can see peers move a
/// `peer_pull` fraction of the way toward the peers' latest forecasts.
class ScriptedAgent final : public Backend {
 public:
  explicit ScriptedAgent(ScriptParams params = {}, std::string model_id = "scripted-agent")
      : params_(std::move(params)), model_id_(std::move(model_id)) {}

  std::string model_id() const override { return model_id_; }
  const ScriptParams& params() const { return params_; }

  std::string complete(const ChatRequest& req, RandomStream& rng) const override {
    // Local stream: a function of the request bytes and one draw from the caller.
    std::string seed_material;
    for (const auto& m : req.messages) seed_material += m.content + '\0';
    seed_material += format_double(req.temperature);
    RandomStream local(mix64(rng.next_u64() ^ fnv1a64(seed_material)));
    const std::string& role = req.speaker;

    std::string text;
    if (params_.emit_sentinels) text += sentinel_for(role, req.round, local.next_u64()) + " ";

    const auto filler_it = params_.filler.find(role);
    const auto& vocab = filler_it != params_.filler.end() ? filler_it->second : detail::default_filler(role);
    for (int i = 0; i < params_.filler_words && !vocab.empty(); ++i) {
      if (i) text += ' ';
      text += vocab[local.below(vocab.size())];
    }
    if (!text.empty()) text += '.';

    if (auto ref = reference(req, local)) text += " " + *ref;

    if (params_.include_impact_line && !local.coin(params_.missing_forecast_probability))
      text += "\n" + detail::format_impact(forecast(req, local));
    return text;
  }

 private:
  /// Event-dependent centre in [-0.5, 0.5], a function of the event block only
  /// so matched units share it across protocols.
  static double baseline(const ChatRequest& req) {
    const std::string& user = req.messages.back().content;
    const auto h = mix64(fnv1a64(std::string_view(user).substr(0, user.find("\n\n"))));
    return static_cast<double>(h % 1001) / 1000.0 - 0.5;
  }

  double forecast(const ChatRequest& req, RandomStream& local) const {
    if (auto it = params_.forecast_table.find(req.speaker); it != params_.forecast_table.end()) {
      const auto& row = it->second;
      if (req.round >= 1 && static_cast<std::size_t>(req.round) <= row.size()) return row[req.round - 1];
    }
    const double independent = baseline(req) + detail::role_bias(req.speaker) +
                               params_.forecast_spread * (2.0 * local.uniform() - 1.0);

    // Latest visible forecast per role.
    std::map<std::string, double> latest;
    for (const auto& t : req.peer_context)
      if (auto f = extract_forecast(t.text)) latest[t.role] = *f;
    double peer_sum = 0;
    int peer_n = 0;
    for (const auto& [r, f] : latest)
      if (r != req.speaker) peer_sum += f, ++peer_n;
    if (peer_n == 0) return std::round(independent * 10) / 10;
    const auto own = latest.find(req.speaker);
    const double start = own != latest.end() ? own->second : independent;
    const double v = start + params_.peer_pull * (peer_sum / peer_n - start) +
                     0.05 * (2.0 * local.uniform() - 1.0);
    return std::round(v * 10) / 10;
  }

  std::optional<std::string> reference(const ChatRequest& req, RandomStream& local) const {
    if (!params_.reference_phrase.empty()) return params_.reference_phrase;
    std::vector<std::string> others;
    for (const auto& t : req.peer_context)
      if (t.role != req.speaker && std::find(others.begin(), others.end(), t.role) == others.end())
        others.push_back(t.role);
    if (others.empty() || !local.coin(params_.reference_probability)) return std::nullopt;
    static constexpr std::array<const char*, 4> kTemplates = {
        "I agree with %s on the direction.", "I disagree with %s about the size of the effect.",
        "I challenge the reasoning of %s here.", "I support the estimate from %s."};
    const std::string& who = others[local.below(others.size())];
    char buf[96];
    std::snprintf(buf, sizeof buf, kTemplates[local.below(kTemplates.size())], who.c_str());
    return std::string(buf);
  }

  ScriptParams params_;
  std::string model_id_;
};

/// Lexical judge: more distinct domain terms and an Impact line score higher.
class ScriptedJudge final : public Backend {
 public:
  explicit ScriptedJudge(std::string model_id = "scripted-judge") : model_id_(std::move(model_id)) {}

  std::string model_id() const override { return model_id_; }

  static int likert_for(std::string_view response) {
    static const std::set<std::string, std::less<>> kDomain = {
        "inflation", "prices", "price", "demand", "supply", "wages", "wage", "costs", "cost",
        "services", "goods", "policy", "expectations", "pressure", "sticky", "core", "shipping",
        "freight", "energy", "housing", "rents", "rate", "rates", "tariffs", "imports", "import",
        "labor", "monetary", "credit", "lending", "yields", "hike", "payrolls", "margins"};
    std::set<std::string> hits;
    std::string word;
    auto flush = [&] {
      if (!word.empty() && kDomain.count(word)) hits.insert(word);
      word.clear();
    };
    for (char c : response) {
      if (std::isalpha(static_cast<unsigned char>(c)))
        word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      else
        flush();
    }
    flush();
    const bool has_impact = extract_forecast(response).has_value();
    const int raw = 1 + std::min<int>(3, static_cast<int>(hits.size()) / 2) + (has_impact ? 1 : 0);
    return std::clamp(raw, 1, 5);
  }

  std::string complete(const ChatRequest& req, RandomStream&) const override {
    return "Relevance and reasoning assessed.\nScore: " + std::to_string(likert_for(judged_response(req)));
  }

 private:
  std::string model_id_;
};

}  // namespace debate
