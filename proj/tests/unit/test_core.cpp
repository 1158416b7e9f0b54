#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "debate/dataset.hpp"
#include "debate/random.hpp"
#include "debate/synthetic.hpp"
#include "support/fixtures.hpp"

using namespace debate;
using testing_support::TempDir;

namespace {

std::vector<std::uint64_t> draws(RandomStream s, int n = 100) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(s.next_u64());
  return out;
}

}  // namespace

TEST(DeriveRng, SameInputsGiveIdenticalDraws) {
  EXPECT_EQ(draws(derive_rng(7, "2016-02", 1, ProtocolKind::CR, "order")),
            draws(derive_rng(7, "2016-02", 1, ProtocolKind::CR, "order")));
}

TEST(DeriveRng, LabelsAreIndependent) {
  EXPECT_NE(draws(derive_rng(7, "2016-02", 1, ProtocolKind::CR, "order")),
            draws(derive_rng(7, "2016-02", 1, ProtocolKind::CR, "jitter")));
}

TEST(DeriveRng, MasterSeedChangesStream) {
  EXPECT_NE(draws(derive_rng(1, "e", 0, ProtocolKind::WR, "order")),
            draws(derive_rng(2, "e", 0, ProtocolKind::WR, "order")));
}

TEST(DeriveRng, EveryComponentMatters) {
  const auto base = draws(derive_rng(3, "e", 0, ProtocolKind::WR, "x"), 4);
  EXPECT_NE(base, draws(derive_rng(3, "f", 0, ProtocolKind::WR, "x"), 4));
  EXPECT_NE(base, draws(derive_rng(3, "e", 1, ProtocolKind::WR, "x"), 4));
  EXPECT_NE(base, draws(derive_rng(3, "e", 0, ProtocolKind::NI, "x"), 4));
}

TEST(DeriveRng, LengthPrefixPreventsConcatenationCollisions) {
  EXPECT_NE(draws(derive_stream(0, {"ab", "c"}), 4), draws(derive_stream(0, {"a", "bc"}), 4));
}

// Frozen from an independent Python (hashlib) computation of the same keyed
// hash and counter generator, so streams stay stable across builds.
TEST(DeriveRng, GoldenValues) {
  auto s = derive_rng(1, "2016-02", 3, ProtocolKind::RA_CR, "order");
  EXPECT_EQ(s.next_u64(), 0xb228dc30d35aca0fULL);
  EXPECT_EQ(s.next_u64(), 0xfd5c3db594b90377ULL);
  EXPECT_EQ(s.next_u64(), 0x74ab136f12fdc92cULL);
  auto t = derive_rng(0, "e", 0, ProtocolKind::WR, "judge");
  EXPECT_EQ(t.next_u64(), 0x1ce219c81ff609ccULL);
}

TEST(RandomStream, UniformAndBelowStayInRange) {
  RandomStream s(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(s.below(7), 7U);
  }
  EXPECT_THROW(s.below(0), std::invalid_argument);
}

TEST(RandomStream, BelowIsRoughlyUniform) {
  RandomStream s(9);
  std::array<int, 5> counts{};
  for (int i = 0; i < 50000; ++i) ++counts[s.below(5)];
  for (int c : counts) EXPECT_NEAR(c / 50000.0, 0.2, 0.01);
}

TEST(Protocol, ParseAndNames) {
  EXPECT_EQ(parse_protocol("RA-CR"), ProtocolKind::RA_CR);
  EXPECT_EQ(parse_protocol("WR"), ProtocolKind::WR);
  EXPECT_EQ(to_string(ProtocolKind::RA_CR), "RA-CR");
  EXPECT_EQ(long_name(ProtocolKind::NI), "No-Interaction");
  EXPECT_THROW(parse_protocol("XX"), ConfigError);
}

TEST(ProtocolSpec, Validation) {
  auto spec = ProtocolSpec::defaults(ProtocolKind::RA_CR);
  EXPECT_TRUE(spec.silencing_enabled);
  EXPECT_EQ(spec.rounds, 2);
  EXPECT_EQ(spec.candidates_per_turn, 2);
  EXPECT_NO_THROW(spec.validate());
  auto wr = ProtocolSpec::defaults(ProtocolKind::WR);
  EXPECT_FALSE(wr.silencing_enabled);
  wr.silencing_enabled = true;
  EXPECT_THROW(wr.validate(), ConfigError);
  spec.rounds = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.rounds = 2;
  spec.candidates_per_turn = 0;
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(Roster, ExactlyThreeDistinctPeerNames) {
  std::vector<AgentRole> ok = {{"Agent A", "m1"}, {"Agent B", "m2"}, {"Agent C", "m3"}};
  EXPECT_NO_THROW(validate_roster(ok));
  auto dup = ok;
  dup[2].name = "Agent A";
  EXPECT_THROW(validate_roster(dup), ConfigError);
  auto stranger = ok;
  stranger[1].name = "Agent Z";
  EXPECT_THROW(validate_roster(stranger), ConfigError);
  ok.pop_back();
  EXPECT_THROW(validate_roster(ok), ConfigError);
}

TEST(DecodingParams, Validation) {
  DecodingParams d;
  EXPECT_DOUBLE_EQ(d.base_temperature, 0.4);
  EXPECT_DOUBLE_EQ(d.jitter_step, 0.15);
  EXPECT_NO_THROW(d.validate());
  d.base_temperature = -0.1;
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(YearMonth, Parse) {
  EXPECT_EQ(YearMonth::parse("2016-02")->str(), "2016-02");
  EXPECT_EQ(YearMonth::parse("2016-02-01")->str(), "2016-02");
  EXPECT_FALSE(YearMonth::parse("2016-13"));
  EXPECT_FALSE(YearMonth::parse("16-02"));
  EXPECT_FALSE(YearMonth::parse("2016/02"));
  EXPECT_FALSE(YearMonth::parse(""));
}

TEST(Dataset, SupplementaryRowsParse) {
  const std::string csv =
      "Date,Inflation (%),Major world event,Inflation relation confirmed?\n"
      "2016-02,2.54,\"The World Health Organization declares the Zika virus outbreak a Public Health "
      "Emergency of International Concern.\",No confirmed correlation with US sticky price movements.\n"
      "2016-05,2.57,\"A massive wildfire in Fort McMurray, Alberta, forces the largest evacuation.\","
      "\"Minimal; energy is excluded from this index.\"\n";
  const auto ds = parse_event_dataset(csv);
  ASSERT_EQ(ds.events.size(), 2U);
  EXPECT_EQ(ds.events[0].id, "2016-02");
  EXPECT_DOUBLE_EQ(ds.events[0].inflation_value, 2.54);
  EXPECT_NE(ds.events[0].event_text.find("Zika"), std::string::npos);
  EXPECT_NE(ds.events[1].event_text.find("Alberta, forces"), std::string::npos);
  EXPECT_EQ(ds.columns.value, "Inflation (%)");
}

TEST(Dataset, HeaderOnlyIsEmpty) {
  EXPECT_TRUE(parse_event_dataset("date,value,event,relation\n").events.empty());
}

TEST(Dataset, ErrorsNameTheRow) {
  try {
    parse_event_dataset("date,value,event,relation\n2016-01,2.5,a,b\n2016-02,abc,e,r\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_event_dataset("date,value,event,relation\n2016-01,2.5,a,b\n2016-01,2.6,c,d\n"),
               ConfigError);
  EXPECT_THROW(parse_event_dataset("date,value,event,relation\n2016-01,2.5,,b\n"), ConfigError);
  EXPECT_THROW(parse_event_dataset("date,value,event,relation\n2016-1x,2.5,a,b\n"), ConfigError);
  EXPECT_THROW(parse_event_dataset("date,value\n2016-01,2.5\n"), ConfigError);
  EXPECT_THROW(load_event_dataset("/nonexistent/events.csv"), ConfigError);
}

TEST(Dataset, ExplicitIdColumn) {
  const auto ds = parse_event_dataset("id,date,value,event,relation\nx1,2016-01,2.5,a,b\nx2,2016-01,2.6,c,d\n");
  ASSERT_EQ(ds.events.size(), 2U);
  EXPECT_EQ(ds.events[1].id, "x2");
}

// Property: write then read is lossless and order-preserving.
TEST(Dataset, RoundTripProperty) {
  TempDir dir("dataset");
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RandomStream rng(seed);
    auto events = synthetic::make_events(1 + rng.below(40), seed);
    // Awkward text: commas, quotes, newlines and non-ASCII.
    for (auto& e : events)
      if (rng.coin(0.3)) e.event_text += ", with \"quotes\"\nand a second line \xC3\xA9";
    if (rng.coin(0.5))
      for (std::size_t i = 0; i < events.size(); ++i) events[i].id = "ev-" + std::to_string(i * 7 % 101);
    const auto path = dir / ("d" + std::to_string(seed) + ".csv");
    write_event_dataset(path, events);
    const auto back = load_event_dataset(path);
    ASSERT_EQ(back.events, events) << "seed " << seed;
  }
}

TEST(Dataset, SyntheticProjectScale) {
  TempDir dir("scale");
  synthetic::write_fixture(dir.path(), 121, 8);
  const auto ds = load_event_dataset(dir / "events.csv");
  EXPECT_EQ(ds.events.size(), 121U);
  EXPECT_EQ(ds.events.front().date.str(), "2016-01");
  EXPECT_EQ(ds.events.back().date.str(), "2026-01");
  EXPECT_EQ(ds.sha256.size(), 64U);
}

TEST(UnitKey, MatchedDesignIdentity) {
  RunUnit a{"e1", 2, ProtocolKind::WR, 0};
  RunUnit b{"e1", 2, ProtocolKind::CR, 0};
  EXPECT_NE(unit_key(a), unit_key(b));
  EXPECT_EQ(unit_key(a), "WR|e1|2");
}
