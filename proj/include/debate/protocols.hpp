#pragma once

// Context visibility, turn ordering and silencing rules of the four protocols.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "debate/agents.hpp"
#include "debate/judge.hpp"
#include "debate/log.hpp"

namespace debate {

struct CandidateRecord {
  double temperature = 0.0;
  std::optional<JudgeScore> score;
  std::string text;
};

struct TurnRecord {
  int round = 1;
  int order_position = 0;  // 1-based among speakers; 0 for silenced records
  std::string role;
  std::string model_id;
  std::string text;
  std::optional<double> forecast;
  std::optional<double> judge_score;
  std::vector<CandidateRecord> candidates;
  int selected_candidate = 0;  // 1-based; 0 when silenced
  bool silenced = false;
  std::string prompt_sha256;
};

struct Transcript {
  RunUnit unit;
  ProtocolSpec protocol;
  std::vector<std::vector<TurnRecord>> rounds;
  std::vector<std::vector<std::string>> orderings;       // speaking order per round
  std::vector<std::vector<std::string>> silenced_roles;  // per round
  bool failed = false;
  std::optional<FailureKind> failure_kind;
  std::string failure_message;

  std::vector<const TurnRecord*> speaking_turns() const {
    std::vector<const TurnRecord*> out;
    for (const auto& round : rounds)
      for (const auto& t : round)
        if (!t.silenced) out.push_back(&t);
    return out;
  }
};

/// Peer context visible to the speaker at `position` (1-based) of round `round`.
///   WR:       all prior-round turns plus earlier turns of the current round
///   CR/RA-CR: all turns of earlier rounds only
///   NI:       nothing
inline std::vector<PeerTurn> visible_context(ProtocolKind kind,
                                             const std::vector<std::vector<TurnRecord>>& rounds,
                                             int round, int position) {
  std::vector<PeerTurn> out;
  if (kind == ProtocolKind::NI) return out;
  for (int r = 1; r <= round && r <= static_cast<int>(rounds.size()); ++r) {
    if (r == round && kind != ProtocolKind::WR) break;
    std::vector<const TurnRecord*> turns;
    for (const auto& t : rounds[static_cast<std::size_t>(r - 1)])
      if (!t.silenced && (r < round || t.order_position < position)) turns.push_back(&t);
    std::sort(turns.begin(), turns.end(),
              [](const auto* a, const auto* b) { return a->order_position < b->order_position; });
    for (const auto* t : turns) out.push_back({t->role, t->round, t->text});
  }
  return out;
}

using RoleScores = std::map<std::string, std::optional<double>>;

/// Speaking order for a round. Uniform shuffle except RA-CR rounds >= 2, which
/// draw sequentially without replacement with weights exp(score / T).
inline std::vector<std::string> round_order(ProtocolKind kind, int round,
                                            const std::vector<std::string>& roles,
                                            const RoleScores& prior_scores, RandomStream& rng,
                                            double order_temperature = 0.25) {
  std::vector<std::string> order = roles;
  if (kind != ProtocolKind::RA_CR || round == 1) {
    rng.shuffle(order);
    return order;
  }
  if (!(order_temperature > 0)) throw ConfigError("order temperature must be > 0");

  std::vector<double> score;
  for (const auto& role : order) {
    auto it = prior_scores.find(role);
    if (it == prior_scores.end() || !it->second) {
      log_warn("no prior-round score for " + role + "; treating it as 0");
      score.push_back(0.0);
    } else {
      score.push_back(*it->second);
    }
  }
  const double top = score.empty() ? 0.0 : *std::max_element(score.begin(), score.end());
  std::vector<double> weight;
  for (double s : score) weight.push_back(std::exp((s - top) / order_temperature));

  std::vector<std::string> out;
  while (!order.empty()) {
    double total = 0;
    for (double w : weight) total += w;
    const double u = rng.uniform() * total;
    std::size_t pick = order.size() - 1;
    double acc = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      acc += weight[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    out.push_back(order[pick]);
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(pick));
    weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

/// Role with the minimal score; ties are broken uniformly.
inline std::string select_silenced(const std::map<std::string, double>& scores, RandomStream& rng) {
  if (scores.size() < 2)
    throw UnitError(FailureKind::protocol, "silencing needs at least two scored roles");
  double low = scores.begin()->second;
  for (const auto& [_, s] : scores) low = std::min(low, s);
  std::vector<std::string> lowest;
  for (const auto& [role, s] : scores)
    if (s == low) lowest.push_back(role);
  return lowest.size() == 1 ? lowest.front() : lowest[rng.below(lowest.size())];
}

}  // namespace debate
