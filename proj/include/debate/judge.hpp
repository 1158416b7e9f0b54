#pragma once

// Likert judging, best-of-N candidate reranking and the judge sanity check.

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "debate/agents.hpp"
#include "debate/log.hpp"

namespace debate {

struct JudgeScore {
  int raw_likert = 1;
  double normalized = 0.0;

  static JudgeScore from_raw(int raw) {
    if (raw < 1 || raw > 5) throw std::out_of_range("Likert score outside [1,5]");
    return {raw, (raw - 1) / 4.0};
  }

  bool operator==(const JudgeScore&) const = default;
};

struct JudgeConfig {
  BackendPtr backend;
  std::string rubric_text = PromptTemplates{}.rubric;
  int parse_retries = 1;
  double temperature = 0.0;
  int max_tokens = 256;

  void validate() const {
    if (!backend) throw ConfigError("judge backend is not configured");
    if (parse_retries < 0) throw ConfigError("judge parse_retries must be >= 0");
  }
};

namespace detail {

// Integer tokens that are not part of a decimal number.
inline std::vector<int> standalone_integers(std::string_view s) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    const bool decimal_tail = i > 0 && s[i - 1] == '.' && i >= 2 &&
                              std::isdigit(static_cast<unsigned char>(s[i - 2]));
    const bool decimal_head = j + 1 < s.size() && s[j] == '.' &&
                              std::isdigit(static_cast<unsigned char>(s[j + 1]));
    if (!decimal_tail && !decimal_head && j - i <= 6) out.push_back(std::stoi(std::string(s.substr(i, j - i))));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Likert value from a judge reply: the integer on a "Score:" line when it is
/// in [1,5], otherwise the first standalone integer in [1,5].
inline std::optional<int> parse_likert(std::string_view reply) {
  const std::string lower = to_lower(reply);
  if (auto pos = lower.rfind("score:"); pos != std::string::npos) {
    auto after = reply.substr(pos + 6);
    auto nums = detail::standalone_integers(after.substr(0, after.find('\n')));
    if (!nums.empty() && nums.front() >= 1 && nums.front() <= 5) return nums.front();
  }
  for (int v : detail::standalone_integers(reply))
    if (v >= 1 && v <= 5) return v;
  return std::nullopt;
}

inline ChatRequest make_judge_request(const JudgeConfig& judge, const PromptBundle& prompt,
                                      std::string_view response_text) {
  ChatRequest req;
  req.messages = {{"system", judge.rubric_text},
                  {"user", prompt.event_block + "\n\nResponse to evaluate:\n<response>\n" +
                               std::string(response_text) + "\n</response>\n"}};
  req.temperature = judge.temperature;
  req.max_tokens = judge.max_tokens;
  req.purpose = RequestPurpose::judge;
  req.speaker = prompt.role;
  req.round = prompt.round;
  return req;
}

/// Scores one response. Transport errors propagate; unparseable replies are
/// retried `parse_retries` times and then reported as missing.
inline std::optional<JudgeScore> score(const JudgeConfig& judge, const PromptBundle& prompt,
                                       std::string_view response_text, RandomStream& rng) {
  if (trim(response_text).empty()) throw std::invalid_argument("score: empty response text");
  judge.validate();
  const ChatRequest req = make_judge_request(judge, prompt, response_text);
  for (int attempt = 0; attempt <= judge.parse_retries; ++attempt) {
    const std::string reply = judge.backend->complete(req, rng);
    if (auto raw = parse_likert(reply)) return JudgeScore::from_raw(*raw);
  }
  log_warn("judge reply for " + prompt.role + " round " + std::to_string(prompt.round) +
           " had no Likert score after " + std::to_string(judge.parse_retries + 1) + " attempts");
  return std::nullopt;
}

/// Temperature of candidate i (1-based) out of n: tau + (i - (n-1)/2) * step, clamped at 0.
inline double candidate_temperature(int i, int n, const DecodingParams& decoding) {
  const double index = decoding.zero_based_jitter ? i - 1 : i;
  const double t = decoding.base_temperature + (index - (n - 1) / 2.0) * decoding.jitter_step;
  return t < 0 ? 0.0 : t;
}

/// Index of a maximal score, ties drawn uniformly from `rng`. Missing scores
/// rank below every present score.
inline std::size_t tie_break(const std::vector<std::optional<double>>& scores, RandomStream& rng) {
  std::optional<double> best;
  for (const auto& s : scores)
    if (s && (!best || *s > *best)) best = s;
  if (!best) throw std::invalid_argument("tie_break: no scored candidates");
  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] && *scores[i] == *best) top.push_back(i);
  return top.size() == 1 ? top.front() : top[rng.below(top.size())];
}

struct BestOfN {
  std::vector<CandidateDraft> candidates;
  std::vector<std::optional<JudgeScore>> scores;
  std::size_t selected = 0;  // index into candidates

  const CandidateDraft& chosen() const { return candidates.at(selected); }
  std::optional<JudgeScore> chosen_score() const { return scores.at(selected); }
};

/// Best-of-N generation: sample n drafts with jittered temperatures, judge
/// each, keep the top-scored one. Any generation failure aborts the turn.
inline BestOfN best_of_n(const Backend& agent, const JudgeConfig& judge, const PromptBundle& prompt,
                         int n, const DecodingParams& decoding, RandomStream& generation_rng,
                         RandomStream& judge_rng, RandomStream& tie_rng) {
  if (n < 1) throw std::invalid_argument("best_of_n: n must be >= 1");
  BestOfN out;
  std::vector<std::optional<double>> normalized;
  for (int i = 1; i <= n; ++i) {
    const double t = candidate_temperature(i, n, decoding);
    out.candidates.push_back(generate(agent, prompt, t, generation_rng, decoding.max_tokens, i));
    out.scores.push_back(score(judge, prompt, out.candidates.back().text, judge_rng));
    normalized.push_back(out.scores.back() ? std::optional(out.scores.back()->normalized)
                                           : std::nullopt);
  }
  const bool any_scored = std::any_of(normalized.begin(), normalized.end(),
                                      [](const auto& s) { return s.has_value(); });
  out.selected = (n == 1 || !any_scored) ? 0 : tie_break(normalized, tie_rng);
  return out;
}

// ---------------------------------------------------------------------------
// Judge validation
// ---------------------------------------------------------------------------

struct ValidationPair {
  std::string event;
  std::string relevant;
  std::string irrelevant;
};

struct PairOutcome {
  std::optional<JudgeScore> relevant;
  std::optional<JudgeScore> irrelevant;
  bool correct = false;
};

struct JudgeValidation {
  std::vector<PairOutcome> pairs;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

inline constexpr std::string_view kValidationImpactLine = "Impact: +0.2%";

/// Strict pairwise accuracy: a pair is correct iff the relevant comment
/// outscores the irrelevant one by at least `margin`.
inline JudgeValidation validate_judge(const JudgeConfig& judge,
                                      const std::vector<ValidationPair>& pairs, double margin,
                                      RandomStream& rng) {
  if (pairs.empty()) throw ConfigError("judge validation needs at least one pair");
  if (!(margin > 0)) throw ConfigError("judge validation margin must be > 0");
  JudgeValidation v;
  for (const auto& p : pairs) {
    PromptBundle prompt;
    prompt.event_block = "Event: " + p.event;
    prompt.role = "validation";
    PairOutcome o;
    o.relevant = score(judge, prompt, p.relevant + "\n" + std::string(kValidationImpactLine), rng);
    o.irrelevant = score(judge, prompt, p.irrelevant + "\n" + std::string(kValidationImpactLine), rng);
    // 1e-12 absorbs representation error in differences such as 0.25 - 0.2.
    o.correct = o.relevant && o.irrelevant &&
                o.relevant->normalized - o.irrelevant->normalized >= margin - 1e-12;
    v.correct += o.correct ? 1 : 0;
    v.pairs.push_back(o);
  }
  v.accuracy = static_cast<double>(v.correct) / static_cast<double>(pairs.size());
  return v;
}

}  // namespace debate
