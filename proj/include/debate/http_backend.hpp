#pragma once

// OpenAI-style chat-completion client for locally served models.

#include <chrono>
#include <optional>
#include <regex>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "debate/agents.hpp"

namespace debate {

struct BackendConfig {
  /// Full endpoint, e.g. http://localhost:11434/v1/chat/completions
  std::string endpoint_url = "http://localhost:11434/v1/chat/completions";
  std::string model_id;
  std::chrono::milliseconds timeout{120000};
  int retries = 2;
  std::chrono::milliseconds backoff{500};

  void validate() const {
    if (model_id.empty()) throw ConfigError("backend model id is empty");
    if (timeout.count() <= 0) throw ConfigError("backend timeout must be > 0");
    if (retries < 0) throw ConfigError("backend retries must be >= 0");
  }
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline ParsedUrl parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("invalid endpoint URL: '" + url + "'");
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/v1/chat/completions")};
}

class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate();
    url_ = parse_endpoint(config_.endpoint_url);
  }

  std::string model_id() const override { return config_.model_id; }
  const BackendConfig& config() const { return config_; }

  static std::string request_body(const std::string& model, const ChatRequest& req,
                                  std::uint64_t seed) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    nlohmann::json body = {{"model", model},
                           {"messages", std::move(messages)},
                           {"temperature", req.temperature},
                           {"max_tokens", req.max_tokens},
                           {"seed", seed},
                           {"stream", false}};
    return body.dump();
  }

  /// Extracts choices[0].message.content verbatim.
  static std::string response_content(const std::string& body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) throw UnitError(FailureKind::transport, "malformed JSON in chat response");
    try {
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw UnitError(FailureKind::transport, "chat response lacks choices[0].message.content");
    }
  }

  std::string complete(const ChatRequest& req, RandomStream& rng) const override {
    const std::string body = request_body(config_.model_id, req, rng.next_u64() & 0x7FFFFFFF);
    for (int attempt = 0;; ++attempt) {
      Attempt a = attempt_once(body);
      if (a.content) return std::move(*a.content);
      if (!a.retryable || attempt >= config_.retries) throw UnitError(a.kind, a.message);
      std::this_thread::sleep_for(config_.backoff * (1LL << std::min(attempt, 10)));
    }
  }

 private:
  struct Attempt {
    std::optional<std::string> content;
    FailureKind kind = FailureKind::transport;
    std::string message;
    bool retryable = true;
  };

  Attempt attempt_once(const std::string& body) const {
    httplib::Client cli(url_.origin);
    cli.set_connection_timeout(config_.timeout);
    cli.set_read_timeout(config_.timeout);
    cli.set_write_timeout(config_.timeout);

    Attempt out;
    const auto start = std::chrono::steady_clock::now();
    auto res = cli.Post(url_.path, body, "application/json");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                              elapsed >= config_.timeout);
      out.kind = timed_out ? FailureKind::timeout : FailureKind::transport;
      out.message = "request to " + config_.endpoint_url + " failed: " + httplib::to_string(err);
      return out;
    }
    if (res->status >= 400) {
      out.retryable = res->status >= 500 || res->status == 429;
      out.message = "HTTP " + std::to_string(res->status) + " from " + config_.endpoint_url + ": " +
                    res->body.substr(0, 200);
      return out;
    }
    try {
      out.content = response_content(res->body);
    } catch (const UnitError& e) {
      out.message = e.what();
    }
    return out;
  }

  BackendConfig config_;
  ParsedUrl url_;
};

}  // namespace debate
