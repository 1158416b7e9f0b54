#include <gtest/gtest.h>

#include <fstream>

#include "debate/selection.hpp"
#include "debate/synthetic.hpp"
#include "support/fixtures.hpp"

using namespace debate;
using testing_support::TempDir;

namespace {

EmbeddingTable table_of(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  EmbeddingTable t;
  for (const auto& [id, v] : rows) t.add(id, v);
  return t;
}

EmbeddingTable random_table(std::size_t n, std::size_t dim, std::uint64_t seed) {
  const auto vecs = synthetic::make_vectors(n, dim, seed);
  EmbeddingTable t;
  for (std::size_t i = 0; i < n; ++i) t.add("id" + std::to_string(1000 + i), vecs[i]);
  return t;
}

/// Independent greedy reference: recomputes every minimum distance from scratch.
std::vector<std::string> naive_greedy(const EmbeddingTable& t, std::size_t k, std::size_t first, DistanceKind kind) {
  std::vector<std::size_t> sel{first};
  while (sel.size() < k) {
    std::optional<std::size_t> best;
    double best_score = -1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::find(sel.begin(), sel.end(), i) != sel.end()) continue;
      double m = std::numeric_limits<double>::infinity();
      for (auto s : sel) m = std::min(m, distance(t.vectors[i], t.vectors[s], kind));
      if (!best || m > best_score + 1e-12 || (m >= best_score - 1e-12 && t.ids[i] < t.ids[*best]))
        best = i, best_score = m;
    }
    sel.push_back(*best);
  }
  std::vector<std::string> out;
  for (auto s : sel) out.push_back(t.ids[s]);
  return out;
}

}  // namespace

TEST(MaxMin, SquareCornersBeforeCentre) {
  // Four corners of a square plus its centre, offset along a third axis so every
  // vector is non-zero; euclidean distances keep the planar geometry.
  const auto t = table_of({{"c", {0, 0, 1}}, {"n", {1, 1, 1}}, {"e", {1, -1, 1}}, {"s", {-1, -1, 1}}, {"w", {-1, 1, 1}}});
  auto sel = max_min_select(t, 4, StartRule{"n"}, DistanceKind::euclidean);
  std::sort(sel.begin(), sel.end());
  EXPECT_EQ(sel, (std::vector<std::string>{"e", "n", "s", "w"}));
}

TEST(MaxMin, EdgeSizes) {
  const auto t = random_table(30, 5, 3);
  EXPECT_EQ(max_min_select(t, 1).size(), 1U);
  auto all = max_min_select(t, 30);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, t.ids);
  EXPECT_THROW(max_min_select(t, 0), ConfigError);
  EXPECT_THROW(max_min_select(t, 31), ConfigError);
  EXPECT_THROW(max_min_select(t, 3, StartRule{"nope"}), ConfigError);
}

TEST(MaxMin, DefaultStartIsFarthestFromCentroid) {
  const auto t = table_of({{"a", {1, 0.1}}, {"b", {1, 0.2}}, {"c", {1, 0.15}}, {"far", {-1, 0.05}}});
  EXPECT_EQ(max_min_select(t, 1).front(), "far");
}

TEST(MaxMin, TiesResolveToSmallestId) {
  const auto t = table_of({{"z", {1, 0}}, {"b", {0, 1}}, {"a", {0, -1}}, {"s", {-1, 0}}});
  const auto sel = max_min_select(t, 2, StartRule{"z"}, DistanceKind::euclidean);
  EXPECT_EQ(sel[1], "s");
  const auto three = max_min_select(t, 3, StartRule{"z"}, DistanceKind::euclidean);
  EXPECT_EQ(three[2], "a");
}

TEST(MaxMin, MatchesNaiveGreedyAndIsDeterministic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = random_table(40 + seed, 6, seed);
    for (auto kind : {DistanceKind::cosine, DistanceKind::euclidean}) {
      const auto sel = max_min_select(t, 12, {}, kind);
      ASSERT_EQ(sel, max_min_select(t, 12, {}, kind));
      ASSERT_EQ(sel, naive_greedy(t, 12, *t.index_of(sel.front()), kind));
      ASSERT_EQ(std::set<std::string>(sel.begin(), sel.end()).size(), 12U);
    }
  }
}

TEST(MaxMin, BeatsRandomSubsetsOnAverage) {
  const auto t = random_table(121, 16, 5);
  const auto sel = max_min_select(t, 20);
  const double greedy = max_min_objective(t, sel);
  RandomStream rng(9);
  double random_sum = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    auto ids = t.ids;
    rng.shuffle(ids);
    ids.resize(20);
    random_sum += max_min_objective(t, ids);
  }
  EXPECT_GT(greedy, random_sum / trials);
}

TEST(Embeddings, LoadValidatesRows) {
  TempDir dir("emb");
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return dir / name;
  };
  const auto ok = load_embeddings(write("ok.jsonl", "{\"id\":\"a\",\"vector\":[3,4]}\n\n{\"id\":\"b\",\"vector\":[0,2]}\n"));
  ASSERT_EQ(ok.size(), 2U);
  EXPECT_DOUBLE_EQ(ok.vectors[0][0], 0.6);
  EXPECT_EQ(ok.dimension, 2U);

  auto message = [&](const std::string& body, const std::set<std::string>* known = nullptr) {
    try {
      load_embeddings(write("bad.jsonl", body), known);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{\"id\":\"a\",\"vector\":[1]}\n{\"id\":\"b\",\"vector\":[1,2]}\n").find("bad.jsonl:2"), std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"vector\":[null, 1]}\n").find("non-finite"), std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"vector\":[0, 0]}\n").find("zero norm"), std::string::npos);
  EXPECT_NE(message("{\"id\":\"a\",\"vector\":[1]}\n{\"id\":\"a\",\"vector\":[2]}\n").find("duplicate"), std::string::npos);
  EXPECT_NE(message("not json\n").find("invalid JSON"), std::string::npos);
  EXPECT_NE(message("").find("empty"), std::string::npos);
  const std::set<std::string> known = {"a"};
  EXPECT_NE(message("{\"id\":\"q\",\"vector\":[1]}\n", &known).find("unknown id 'q'"), std::string::npos);
  EXPECT_THROW(load_embeddings(dir / "absent.jsonl"), ConfigError);
}

TEST(Distance, Kinds) {
  EXPECT_EQ(parse_distance("cosine"), DistanceKind::cosine);
  EXPECT_THROW(parse_distance("manhattan"), ConfigError);
  EXPECT_NEAR(distance({1, 0}, {0, 1}, DistanceKind::cosine), 1.0, 1e-15);
  EXPECT_NEAR(distance({1, 0}, {0, 1}, DistanceKind::euclidean), std::sqrt(2.0), 1e-15);
}
