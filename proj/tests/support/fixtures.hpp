#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "debate/debate.hpp"
#include "debate/scripted.hpp"
#include "debate/synthetic.hpp"

namespace testing_support {

using namespace debate;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("debate-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct RecordedCall {
  std::string speaker;
  int round = 0;
  std::string user_text;
  std::vector<PeerTurn> peer_context;
};

/// Wraps a backend and keeps every request it sees.
class RecordingBackend final : public Backend {
 public:
  explicit RecordingBackend(BackendPtr inner) : inner_(std::move(inner)) {}
  std::string complete(const ChatRequest& req, RandomStream& rng) const override {
    {
      std::lock_guard lock(mu_);
      calls_.push_back({req.speaker, req.round, req.messages.back().content, req.peer_context});
    }
    return inner_->complete(req, rng);
  }
  std::string model_id() const override { return inner_->model_id(); }
  std::vector<RecordedCall> calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }
  void clear() {
    std::lock_guard lock(mu_);
    calls_.clear();
  }

 private:
  BackendPtr inner_;
  mutable std::mutex mu_;
  mutable std::vector<RecordedCall> calls_;
};

/// Judge answering with a fixed raw score per responding role letter
/// ("Agent A" -> scores[0] ...), read from a sentinel in the response.
inline BackendPtr role_score_judge(std::array<int, 3> scores) {
  return std::make_shared<FunctionBackend>("role-judge", [scores](const ChatRequest& req, RandomStream&) {
    const auto s = find_sentinels(judged_response(req));
    const int idx = s.empty() ? 0 : s.front().role_letter - 'A';
    return "Score: " + std::to_string(scores[static_cast<std::size_t>(std::clamp(idx, 0, 2))]);
  });
}

inline DebateSetup scripted_setup(ScriptParams params = {}, BackendPtr judge = nullptr) {
  DebateSetup setup;
  setup.roles = default_roles({"scripted-a", "scripted-b", "scripted-c"});
  for (const auto& r : setup.roles) setup.backends[r.name] = std::make_shared<ScriptedAgent>(params, r.model_id);
  setup.judge.backend = judge ? judge : std::make_shared<ScriptedJudge>();
  return setup;
}

/// A loopback port with nothing listening on it.
inline int closed_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

inline Event sample_event(const std::string& id = "2016-02") {
  Event e;
  e.id = id;
  e.date = *YearMonth::parse(id.size() >= 7 ? id.substr(0, 7) : "2016-02");
  e.inflation_value = 2.54;
  e.event_text =
      "The World Health Organization declares the Zika virus outbreak a Public Health Emergency of "
      "International Concern.";
  e.relation_note = "No confirmed correlation with US sticky price movements.";
  return e;
}

}  // namespace testing_support
