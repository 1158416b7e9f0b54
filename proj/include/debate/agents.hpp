#pragma once

// Prompt assembly and the backend interface agents and the judge call through.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "debate/core.hpp"
#include "debate/hash.hpp"
#include "debate/random.hpp"
#include "debate/text.hpp"

namespace debate {

/// One earlier turn made visible to the current speaker.
struct PeerTurn {
  std::string role;
  int round = 0;
  std::string text;

  bool operator==(const PeerTurn&) const = default;
};

struct PromptBundle {
  std::string system_text;
  std::string event_block;
  std::vector<PeerTurn> peer_context;  // chronological: round, then turn order
  std::string format_instruction;

  // Not rendered; lets scripted backends know who is speaking.
  std::string role;
  int round = 0;

  std::string peer_block() const {
    if (peer_context.empty()) return {};
    std::string out = "Messages from the debate so far:\n";
    for (const auto& t : peer_context)
      out += "\n[" + t.role + ", round " + std::to_string(t.round) + "]\n" + t.text + "\n";
    return out;
  }

  /// The user message. Only the peer block differs between protocols.
  std::string user_text() const {
    std::string out = event_block + "\n\n";
    if (!peer_context.empty()) out += peer_block() + "\n";
    out += format_instruction + "\n";
    return out;
  }

  std::string sha256() const { return sha256_hex(system_text + '\0' + user_text()); }
};

/// Prompt wording. Every string is hashed into the run manifest.
struct PromptTemplates {
  std::string system_template =
      "You are {role}, one of three analysts (Agent A, Agent B, Agent C) assessing how a "
      "world event relates to US sticky-price core inflation. When you respond to another "
      "analyst's point, refer to them by name.";
  std::string format_instruction =
      "Give a concise analysis (at most 150 words). Finish with a single line of the form "
      "\"Impact: +x.x%\" or \"Impact: -x.x%\" giving your estimated effect on sticky core "
      "inflation.";
  std::string rubric =
      "You are an impartial evaluator of economic commentary. Rate the response on a Likert "
      "scale from 1 (poor) to 5 (excellent) for relevance to the stated event, quality of the "
      "reasoning about sticky-price core inflation, and a clear numeric Impact line. Give a "
      "one-sentence justification, then end with a final line \"Score: k\" where k is an "
      "integer from 1 to 5.";

  /// Loads system.txt, format.txt and rubric.txt from a directory; absent files keep defaults.
  static PromptTemplates load(const std::filesystem::path& dir) {
    PromptTemplates t;
    if (dir.empty()) return t;
    if (!std::filesystem::is_directory(dir))
      throw ConfigError("template directory not found: " + dir.string());
    auto read = [&](const char* name, std::string& slot) {
      const auto p = dir / name;
      if (!std::filesystem::exists(p)) return;
      std::string s = read_file_bytes(p);
      while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
      if (s.empty()) throw ConfigError("empty template file: " + p.string());
      slot = std::move(s);
    };
    read("system.txt", t.system_template);
    read("format.txt", t.format_instruction);
    read("rubric.txt", t.rubric);
    return t;
  }

  std::string system_for(std::string_view role) const {
    std::string out = system_template;
    for (std::size_t pos; (pos = out.find("{role}")) != std::string::npos;)
      out.replace(pos, 6, role);
    return out;
  }
};

inline std::string render_event_block(const Event& event) {
  return "Date: " + event.date.str() + "\nSticky-price core CPI inflation (%): " +
         format_double(event.inflation_value) + "\nMajor world event: " + event.event_text +
         "\nInflation relation note: " + event.relation_note;
}

/// Assembles an agent prompt. `visible_turns` must already be filtered by the
/// protocol; NI never receives peer context.
inline PromptBundle render_prompt(const Event& event, const AgentRole& role,
                                  std::vector<PeerTurn> visible_turns, ProtocolKind protocol,
                                  int round, const PromptTemplates& templates = {}) {
  if (protocol == ProtocolKind::NI && !visible_turns.empty())
    throw UnitError(FailureKind::protocol, "NI prompt given peer context");
  PromptBundle p;
  p.system_text = templates.system_for(role.name);
  p.event_block = render_event_block(event);
  p.peer_context = std::move(visible_turns);
  p.format_instruction = templates.format_instruction;
  p.role = role.name;
  p.round = round;
  return p;
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

struct ChatMessage {
  std::string role;  // "system" | "user"
  std::string content;
};

enum class RequestPurpose { agent_turn, judge };

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;

  // Local metadata, never sent over the wire.
  RequestPurpose purpose = RequestPurpose::agent_turn;
  std::string speaker;
  int round = 0;
  std::vector<PeerTurn> peer_context;
};

/// A text generator. Implementations must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Returns the model's reply text, or throws UnitError.
  virtual std::string complete(const ChatRequest& request, RandomStream& rng) const = 0;
  virtual std::string model_id() const = 0;
};

using BackendPtr = std::shared_ptr<const Backend>;

struct CandidateDraft {
  std::string text;
  double temperature = 0.0;
  int candidate_index = 1;  // 1-based
};

inline ChatRequest make_agent_request(const PromptBundle& prompt, double temperature, int max_tokens) {
  ChatRequest req;
  req.messages = {{"system", prompt.system_text}, {"user", prompt.user_text()}};
  req.temperature = temperature;
  req.max_tokens = max_tokens;
  req.purpose = RequestPurpose::agent_turn;
  req.speaker = prompt.role;
  req.round = prompt.round;
  req.peer_context = prompt.peer_context;
  return req;
}

inline CandidateDraft generate(const Backend& backend, const PromptBundle& prompt,
                               double temperature, RandomStream& rng, int max_tokens = 512,
                               int candidate_index = 1) {
  if (temperature < 0) throw std::invalid_argument("generate: negative temperature");
  std::string text = backend.complete(make_agent_request(prompt, temperature, max_tokens), rng);
  if (trim(text).empty())
    throw UnitError(FailureKind::empty_output,
                    "empty output from model '" + backend.model_id() + "'");
  return {std::move(text), temperature, candidate_index};
}

}  // namespace debate
