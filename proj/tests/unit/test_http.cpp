#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "debate/http_backend.hpp"
#include "support/fixtures.hpp"

using namespace debate;
using nlohmann::json;

namespace {

/// In-process chat-completion server on an ephemeral port.
class MockServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit MockServer(Handler h) {
    server_.Post("/v1/chat/completions", [this, h](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      h(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
};

std::string reply(const std::string& content) {
  return json{{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}}.dump();
}

BackendConfig config(const std::string& url, int retries = 2) {
  BackendConfig c;
  c.endpoint_url = url;
  c.model_id = "llama3.1:8b";
  c.timeout = std::chrono::milliseconds(2000);
  c.retries = retries;
  c.backoff = std::chrono::milliseconds(1);
  return c;
}

ChatRequest request() {
  ChatRequest r;
  r.messages = {{"system", "sys"}, {"user", "hello"}};
  r.temperature = 0.475;
  r.max_tokens = 64;
  return r;
}

FailureKind failure_of(const Backend& b) {
  RandomStream rng(1);
  try {
    b.complete(request(), rng);
  } catch (const UnitError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected UnitError";
  return FailureKind::config;
}

}  // namespace

TEST(HttpBackend, WireFormat) {
  json seen;
  MockServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    res.set_content(reply("Analysis.\nImpact: +0.1%"), "application/json");
  });
  HttpBackend b(config(server.url()));
  RandomStream rng(1);
  EXPECT_EQ(b.complete(request(), rng), "Analysis.\nImpact: +0.1%");
  EXPECT_EQ(seen["model"], "llama3.1:8b");
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][1]["content"], "hello");
  EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.475);
  EXPECT_EQ(seen["max_tokens"], 64);
  EXPECT_EQ(seen["stream"], false);
  EXPECT_TRUE(seen["seed"].is_number_integer());
}

TEST(HttpBackend, RetriesServerErrors) {
  std::atomic<int> n{0};
  MockServer server([&](const httplib::Request&, httplib::Response& res) {
    if (n++ < 2) {
      res.status = 503;
      res.set_content("busy", "text/plain");
    } else {
      res.set_content(reply("ok"), "application/json");
    }
  });
  HttpBackend b(config(server.url(), 2));
  RandomStream rng(1);
  EXPECT_EQ(b.complete(request(), rng), "ok");
  EXPECT_EQ(server.hits(), 3);

  n = 0;
  HttpBackend once(config(server.url(), 1));
  EXPECT_EQ(failure_of(once), FailureKind::transport);
}

TEST(HttpBackend, ClientErrorsAreNotRetried) {
  MockServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 404;
    res.set_content("model not found", "text/plain");
  });
  HttpBackend b(config(server.url(), 3));
  EXPECT_EQ(failure_of(b), FailureKind::transport);
  EXPECT_EQ(server.hits(), 1);
}

TEST(HttpBackend, MalformedBodyIsTransportFailure) {
  MockServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"choices\": []}", "application/json");
  });
  HttpBackend b(config(server.url(), 0));
  EXPECT_EQ(failure_of(b), FailureKind::transport);
}

TEST(HttpBackend, SlowServerTimesOut) {
  MockServer server([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
    res.set_content(reply("late"), "application/json");
  });
  auto c = config(server.url(), 0);
  c.timeout = std::chrono::milliseconds(50);
  HttpBackend b(c);
  EXPECT_EQ(failure_of(b), FailureKind::timeout);
}

TEST(HttpBackend, ConnectionRefusedIsTransport) {
  HttpBackend b(config("http://127.0.0.1:" + std::to_string(testing_support::closed_port()) + "/v1/chat/completions", 1));
  EXPECT_EQ(failure_of(b), FailureKind::transport);
}

TEST(HttpBackend, ConfigValidation) {
  EXPECT_THROW(HttpBackend(config("not a url")), ConfigError);
  auto c = config("http://localhost:1");
  c.model_id.clear();
  EXPECT_THROW(HttpBackend{c}, ConfigError);
  EXPECT_EQ(parse_endpoint("http://h:8000").path, "/v1/chat/completions");
  EXPECT_EQ(parse_endpoint("http://h:8000/api").origin, "http://h:8000");
}
