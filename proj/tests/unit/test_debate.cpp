#include <gtest/gtest.h>

#include "debate/debate.hpp"
#include "debate/transcript_io.hpp"
#include "support/fixtures.hpp"

using namespace debate;
using namespace testing_support;

namespace {

Transcript run(ProtocolKind kind, const DebateSetup& setup, int seed = 0, const std::string& id = "2016-02") {
  return run_debate({id, seed, kind, 1}, ProtocolSpec::defaults(kind), sample_event(id), setup);
}

}  // namespace

TEST(RunDebate, TurnCountsPerProtocol) {
  const auto setup = scripted_setup();
  for (auto kind : {ProtocolKind::WR, ProtocolKind::CR, ProtocolKind::NI}) {
    const auto tr = run(kind, setup);
    ASSERT_FALSE(tr.failed) << tr.failure_message;
    ASSERT_EQ(tr.rounds.size(), 2U);
    for (const auto& r : tr.rounds) EXPECT_EQ(r.size(), 3U);
    EXPECT_EQ(tr.speaking_turns().size(), 6U);
  }
  const auto ra = run(ProtocolKind::RA_CR, setup);
  ASSERT_FALSE(ra.failed);
  EXPECT_EQ(ra.rounds[0].size(), 3U);
  ASSERT_EQ(ra.rounds[1].size(), 3U);
  EXPECT_EQ(ra.orderings[1].size(), 2U);
  ASSERT_EQ(ra.silenced_roles[1].size(), 1U);
  EXPECT_TRUE(ra.rounds[1][2].silenced);
  EXPECT_EQ(ra.rounds[1][2].role, ra.silenced_roles[1][0]);
  EXPECT_EQ(ra.speaking_turns().size(), 5U);
}

TEST(RunDebate, TurnRecordsAreComplete) {
  const auto tr = run(ProtocolKind::WR, scripted_setup());
  for (const auto* t : tr.speaking_turns()) {
    EXPECT_EQ(t->candidates.size(), 2U);
    EXPECT_GE(t->selected_candidate, 1);
    EXPECT_EQ(t->text, t->candidates[static_cast<std::size_t>(t->selected_candidate - 1)].text);
    EXPECT_TRUE(t->forecast.has_value());
    EXPECT_TRUE(t->judge_score.has_value());
    EXPECT_EQ(t->prompt_sha256.size(), 64U);
    EXPECT_NEAR(t->candidates[0].temperature, 0.475, 1e-15);
    EXPECT_NEAR(t->candidates[1].temperature, 0.625, 1e-15);
  }
}

TEST(RunDebate, LowestScoredRoleIsSilenced) {
  ScriptParams p;
  p.emit_sentinels = true;
  const auto setup = scripted_setup(p, role_score_judge({5, 3, 1}));
  for (int seed = 0; seed < 5; ++seed) {
    const auto tr = run(ProtocolKind::RA_CR, setup, seed);
    ASSERT_FALSE(tr.failed) << tr.failure_message;
    EXPECT_EQ(tr.silenced_roles[1], std::vector<std::string>{"Agent C"});
  }
}

TEST(RunDebate, SilencingCanBeDisabled) {
  auto spec = ProtocolSpec::defaults(ProtocolKind::RA_CR);
  spec.silencing_enabled = false;
  const auto tr = run_debate({"2016-02", 0, ProtocolKind::RA_CR, 1}, spec, sample_event(), scripted_setup());
  EXPECT_EQ(tr.speaking_turns().size(), 6U);
  EXPECT_TRUE(tr.silenced_roles[1].empty());
}

TEST(RunDebate, ReplayIsByteIdentical) {
  const auto setup = scripted_setup();
  for (auto kind : kAllProtocols)
    for (int seed = 0; seed < 3; ++seed)
      EXPECT_EQ(transcript_line(run(kind, setup, seed), "h"), transcript_line(run(kind, setup, seed), "h"));
  EXPECT_NE(transcript_line(run(ProtocolKind::WR, setup, 0), "h"), transcript_line(run(ProtocolKind::WR, setup, 1), "h"));
}

TEST(RunDebate, FirstSpeakerPromptMatchesAcrossProtocols) {
  auto rec = std::make_shared<RecordingBackend>(std::make_shared<ScriptedAgent>());
  auto setup = scripted_setup();
  for (auto& [_, b] : setup.backends) b = rec;
  std::set<std::string> round1_first;
  for (auto kind : kAllProtocols) {
    rec->clear();
    run(kind, setup);
    for (const auto& c : rec->calls())
      if (c.round == 1 && c.peer_context.empty()) round1_first.insert(c.speaker + "\n" + c.user_text);
  }
  // Each role's context-free prompt is the same bytes under every protocol.
  EXPECT_EQ(round1_first.size(), 3U);
}

TEST(RunDebate, BackendFailureIsRecorded) {
  auto setup = scripted_setup();
  setup.backends["Agent B"] = std::make_shared<FunctionBackend>("down", [](const ChatRequest&, RandomStream&) -> std::string {
    throw UnitError(FailureKind::timeout, "timed out after 1 ms");
  });
  const auto tr = run(ProtocolKind::CR, setup);
  EXPECT_TRUE(tr.failed);
  EXPECT_EQ(tr.failure_kind, FailureKind::timeout);
  EXPECT_NE(tr.failure_message.find("timed out"), std::string::npos);
}

TEST(RunDebate, ConfigurationErrorsThrow) {
  auto setup = scripted_setup();
  EXPECT_THROW(run_debate({"e", 0, ProtocolKind::WR, 1}, ProtocolSpec::defaults(ProtocolKind::CR), sample_event(), setup),
               ConfigError);
  setup.backends.erase("Agent C");
  EXPECT_THROW(run(ProtocolKind::WR, setup), ConfigError);
}
