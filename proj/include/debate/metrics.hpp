#pragma once

// Peer-reference rate (PRR), argument diversity (AD) and consensus formation (CF).

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "debate/forecast.hpp"
#include "debate/protocols.hpp"

namespace debate {

using TokenSet = std::set<std::string>;

struct Lexicons {
  std::vector<std::string> peer_names{kPeerNames.begin(), kPeerNames.end()};
  std::vector<std::string> stance_words{"agree", "disagree", "challenge", "support"};
};

struct MetricsRecord {
  RunUnit unit;
  std::optional<double> prr;  // nullopt: not applicable (NI)
  std::optional<double> ad;   // nullopt: fewer than two speaking turns
  std::optional<double> cf;   // nullopt: missing (too few valid forecasts)
  int n_turns = 0;
  std::optional<double> first_round_variance;
  std::optional<double> final_round_variance;
  std::vector<int> valid_forecast_counts;  // per round
};

/// Lowercased maximal ASCII-alphabetic runs of length >= 3.
inline TokenSet tokenize(std::string_view text) {
  TokenSet out;
  std::string word;
  auto flush = [&] {
    if (word.size() >= 3) out.insert(word);
    word.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 128 && std::isalpha(u))
      word += static_cast<char>(std::tolower(u));
    else
      flush();
  }
  flush();
  return out;
}

/// Jaccard similarity; two empty sets are identical (J = 1).
inline double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else ++inter, ++ia, ++ib;
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Mean pairwise Jaccard dissimilarity over n >= 2 token sets.
inline double argument_diversity(const std::vector<TokenSet>& sets) {
  if (sets.size() < 2) throw std::invalid_argument("argument_diversity needs at least two token sets");
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j, ++pairs) sum += 1.0 - jaccard(sets[i], sets[j]);
  return sum / static_cast<double>(pairs);
}

/// Population variance.
inline double population_variance(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("variance of empty sample");
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size());
}

inline constexpr double kDefaultCfEpsilon = 1e-9;

/// Clamped relative variance reduction from the first to the final round.
inline std::optional<double> consensus_formation(const std::vector<double>& first_round,
                                                 const std::vector<double>& final_round,
                                                 double epsilon = kDefaultCfEpsilon) {
  if (first_round.size() < 2 || final_round.size() < 2) return std::nullopt;
  const double v1 = population_variance(first_round);
  const double vr = population_variance(final_round);
  if (v1 <= epsilon) return vr <= epsilon ? 1.0 : 0.0;
  return std::clamp(1.0 - vr / v1, 0.0, 1.0);
}

namespace detail {

inline bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

/// Case-insensitive whole-word search for a (possibly multi-word) name.
inline bool mentions(std::string_view lower_text, std::string_view lower_name) {
  for (auto pos = lower_text.find(lower_name); pos != std::string_view::npos;
       pos = lower_text.find(lower_name, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(lower_text[pos - 1]);
    const auto end = pos + lower_name.size();
    const bool right_ok = end >= lower_text.size() || !is_word_char(lower_text[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace detail

/// True when the turn names a peer other than the speaker and contains a stance word.
inline bool is_peer_reference(std::string_view speaker, std::string_view text, const Lexicons& lex) {
  const std::string lower = to_lower(text);
  const std::string self = to_lower(speaker);
  bool peer = false;
  for (const auto& name : lex.peer_names) {
    const std::string n = to_lower(name);
    if (n != self && detail::mentions(lower, n)) {
      peer = true;
      break;
    }
  }
  if (!peer) return false;
  const TokenSet words = [&] {
    TokenSet s;
    std::string w;
    for (char c : lower) {
      if (std::isalpha(static_cast<unsigned char>(c))) w += c;
      else if (!w.empty()) s.insert(std::exchange(w, {}));
    }
    if (!w.empty()) s.insert(w);
    return s;
  }();
  for (const auto& stance : lex.stance_words)
    if (words.count(to_lower(stance))) return true;
  return false;
}

/// Fraction of speaking turns that reference a peer; not applicable under NI.
inline std::optional<double> peer_reference_rate(const Transcript& tr, const Lexicons& lex = {}) {
  if (tr.protocol.kind == ProtocolKind::NI) return std::nullopt;
  const auto turns = tr.speaking_turns();
  if (turns.empty()) throw std::invalid_argument("peer_reference_rate: no speaking turns");
  int hits = 0;
  for (const auto* t : turns) hits += is_peer_reference(t->role, t->text, lex) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(turns.size());
}

inline std::vector<double> round_forecasts(const Transcript& tr, int round) {
  std::vector<double> out;
  for (const auto& t : tr.rounds.at(static_cast<std::size_t>(round - 1)))
    if (!t.silenced && t.forecast) out.push_back(*t.forecast);
  return out;
}

inline MetricsRecord compute_metrics(const Transcript& tr, const Lexicons& lex = {},
                                     double cf_epsilon = kDefaultCfEpsilon) {
  if (tr.failed) throw std::invalid_argument("compute_metrics: transcript of a failed unit");
  if (tr.rounds.empty()) throw std::invalid_argument("compute_metrics: transcript has no rounds");
  MetricsRecord m;
  m.unit = tr.unit;
  const auto turns = tr.speaking_turns();
  m.n_turns = static_cast<int>(turns.size());
  if (!turns.empty()) m.prr = peer_reference_rate(tr, lex);

  if (turns.size() >= 2) {
    std::vector<TokenSet> sets;
    for (const auto* t : turns) sets.push_back(tokenize(t->text));
    m.ad = argument_diversity(sets);
  }

  for (int r = 1; r <= static_cast<int>(tr.rounds.size()); ++r)
    m.valid_forecast_counts.push_back(static_cast<int>(round_forecasts(tr, r).size()));
  const auto first = round_forecasts(tr, 1);
  const auto last = round_forecasts(tr, static_cast<int>(tr.rounds.size()));
  if (!first.empty()) m.first_round_variance = population_variance(first);
  if (!last.empty()) m.final_round_variance = population_variance(last);
  m.cf = consensus_formation(first, last, cf_epsilon);
  return m;
}

}  // namespace debate
