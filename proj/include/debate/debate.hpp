#pragma once

// Executes one debate unit end to end.

#include <map>
#include <string>
#include <vector>

#include "debate/forecast.hpp"
#include "debate/protocols.hpp"

namespace debate {

struct DebateSetup {
  std::vector<AgentRole> roles;                // the three debaters, in canonical order
  std::map<std::string, BackendPtr> backends;  // keyed by role name
  JudgeConfig judge;
  DecodingParams decoding;
  PromptTemplates templates;
  double order_temperature = 0.25;

  void validate() const {
    validate_roster(roles);
    for (const auto& r : roles)
      if (!backends.count(r.name) || !backends.at(r.name))
        throw ConfigError("no backend configured for " + r.name);
    judge.validate();
    decoding.validate();
    if (!(order_temperature > 0)) throw ConfigError("order temperature must be > 0");
  }
};

inline std::vector<AgentRole> default_roles(const std::vector<std::string>& model_ids = {}) {
  std::vector<AgentRole> roles;
  for (std::size_t i = 0; i < kPeerNames.size(); ++i)
    roles.push_back({std::string(kPeerNames[i]), i < model_ids.size() ? model_ids[i] : "scripted-agent"});
  return roles;
}

/// Runs every round of `unit` under `protocol`. Backend or judge failures are
/// caught and recorded on the returned (partial) transcript.
inline Transcript run_debate(const RunUnit& unit, const ProtocolSpec& protocol, const Event& event,
                             const DebateSetup& setup) {
  setup.validate();
  protocol.validate();
  if (protocol.kind != unit.protocol)
    throw ConfigError("protocol spec does not match the run unit");

  Transcript tr;
  tr.unit = unit;
  tr.protocol = protocol;

  RandomStream order_rng = derive_rng(unit, "order");
  RandomStream silence_rng = derive_rng(unit, "silence-tiebreak");
  RandomStream gen_rng = derive_rng(unit, "generate");
  RandomStream judge_rng = derive_rng(unit, "judge");
  RandomStream tie_rng = derive_rng(unit, "judge-tie");
  RandomStream control_rng = derive_rng(unit, "judge-control");

  std::vector<std::string> role_names;
  std::map<std::string, std::string> model_of;
  for (const auto& r : setup.roles) {
    role_names.push_back(r.name);
    model_of[r.name] = r.model_id;
  }
  const bool adaptive = protocol.kind == ProtocolKind::RA_CR;
  RoleScores last_score;  // RA-CR controller scores, latest per role

  try {
    for (int r = 1; r <= protocol.rounds; ++r) {
      tr.rounds.emplace_back();
      tr.silenced_roles.emplace_back();
      std::vector<std::string> speakers = role_names;
      std::vector<std::string> order;

      if (adaptive && r >= 2) {
        std::map<std::string, double> known;
        for (const auto& name : role_names) {
          const auto it = last_score.find(name);
          known[name] = (it != last_score.end() && it->second) ? *it->second : 0.0;
        }
        if (protocol.silencing_enabled) {
          const std::string muted = select_silenced(known, silence_rng);
          tr.silenced_roles.back().push_back(muted);
          speakers.erase(std::find(speakers.begin(), speakers.end(), muted));
        }
        order = round_order(protocol.kind, r, speakers, last_score, order_rng, setup.order_temperature);
      } else {
        order = round_order(protocol.kind, r, speakers, {}, order_rng);
      }
      tr.orderings.push_back(order);

      std::vector<PromptBundle> prompts;
      for (std::size_t pos = 1; pos <= order.size(); ++pos) {
        const AgentRole role{order[pos - 1], model_of[order[pos - 1]]};
        auto visible = visible_context(protocol.kind, tr.rounds, r, static_cast<int>(pos));
        PromptBundle prompt = render_prompt(event, role, std::move(visible), protocol.kind, r, setup.templates);

        const Backend& agent = *setup.backends.at(role.name);
        BestOfN bon = best_of_n(agent, setup.judge, prompt, protocol.candidates_per_turn,
                                setup.decoding, gen_rng, judge_rng, tie_rng);

        TurnRecord turn;
        turn.round = r;
        turn.order_position = static_cast<int>(pos);
        turn.role = role.name;
        turn.model_id = agent.model_id();
        turn.text = bon.chosen().text;
        turn.forecast = extract_forecast(turn.text);
        if (auto s = bon.chosen_score()) turn.judge_score = s->normalized;
        for (std::size_t i = 0; i < bon.candidates.size(); ++i)
          turn.candidates.push_back({bon.candidates[i].temperature, bon.scores[i], bon.candidates[i].text});
        turn.selected_candidate = static_cast<int>(bon.selected) + 1;
        turn.prompt_sha256 = prompt.sha256();
        tr.rounds.back().push_back(std::move(turn));
        prompts.push_back(std::move(prompt));
      }

      for (const auto& muted : tr.silenced_roles.back()) {
        TurnRecord rec;
        rec.round = r;
        rec.role = muted;
        rec.model_id = setup.backends.at(muted)->model_id();
        rec.silenced = true;
        tr.rounds.back().push_back(std::move(rec));
      }

      // The controller re-scores the round's selected texts for the next round.
      if (adaptive) {
        for (std::size_t i = 0; i < prompts.size(); ++i) {
          auto& turn = tr.rounds.back()[i];
          auto control = score(setup.judge, prompts[i], turn.text, control_rng);
          if (control) turn.judge_score = control->normalized;
          last_score[turn.role] = turn.judge_score;
        }
      }
    }
  } catch (const UnitError& e) {
    tr.failed = true;
    tr.failure_kind = e.kind();
    tr.failure_message = e.what();
  }
  return tr;
}

}  // namespace debate
