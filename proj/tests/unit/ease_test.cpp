#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lakebench/ease.hpp"
#include "lakebench/error.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace lakebench;

namespace {

std::vector<std::uint32_t> ids(std::span<const NodeId> nodes) {
  std::vector<std::uint32_t> out;
  for (auto n : nodes) out.push_back(index_of(n));
  return out;
}

DataGraph labelled_path(std::initializer_list<const char*> labels) {
  GraphBuilder b;
  std::size_t i = 0;
  for (const char* label : labels) b.add_node(i++, {std::string(label)});
  for (std::size_t j = 0; j + 1 < labels.size(); ++j) b.add_edge(node_id(j), node_id(j + 1));
  return std::move(b).build();
}

IndexConfig config(std::uint32_t r, MatchMode mode = MatchMode::any, std::uint32_t m = 10) {
  return IndexConfig{r, mode, m};
}

std::vector<testkit::OracleHit> as_oracle(const SearchResult& res) {
  std::vector<testkit::OracleHit> out;
  for (const auto& h : res.hits) out.push_back({index_of(h.center), h.matched, h.member_count});
  return out;
}

}  // namespace

TEST(BuildIndex, SingleNode) {
  auto g = labelled_path({"a"});
  auto idx = build_index(g, config(2));
  EXPECT_EQ(ids(idx.postings("a")), std::vector<std::uint32_t>{0});
  EXPECT_EQ(ids(idx.members(node_id(0))), std::vector<std::uint32_t>{0});
  EXPECT_EQ(idx.subgraph_count(), 1u);
}

TEST(BuildIndex, ThreeNodePathRadiusOne) {
  // 1-radius balls: {0,1}, {0,1,2}, {1,2}; inverting by keyword gives the lists.
  auto idx = build_index(labelled_path({"a", "b", "c"}), config(1));
  EXPECT_EQ(ids(idx.postings("a")), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(ids(idx.postings("b")), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(ids(idx.postings("c")), (std::vector<std::uint32_t>{1, 2}));
  EXPECT_TRUE(idx.postings("zzz").empty());
  EXPECT_EQ(idx.subgraph(node_id(1)),
            (RadiusSubgraph{node_id(1), 1, {node_id(0), node_id(1), node_id(2)}}));
}

TEST(BuildIndex, EmptyKeywordNodeAddsNoPostings) {
  GraphBuilder b;
  b.add_node(0, {"a"});
  b.add_node(1, std::vector<std::string>{});
  b.add_edge(node_id(0), node_id(1));
  auto idx = build_index(std::move(b).build(), config(1));
  EXPECT_EQ(idx.distinct_keywords(), 1u);
  EXPECT_EQ(ids(idx.postings("a")), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(ids(idx.members(node_id(1))), (std::vector<std::uint32_t>{0, 1}));
}

TEST(BuildIndex, RejectsBadConfig) {
  auto g = labelled_path({"a"});
  EXPECT_THROW(build_index(g, config(0)), InvalidInput);
  EXPECT_THROW(build_index(g, config(1, MatchMode::any, 0)), InvalidInput);
}

TEST(BuildIndex, ContainmentInvariantOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto raw = testkit::random_graph(rng, 50);
    const std::uint32_t r = 1 + static_cast<std::uint32_t>(rng() % 3);
    auto idx = build_index(raw.build(), config(r));
    ASSERT_EQ(idx.subgraph_count(), raw.n);
    std::set<std::string> vocab;
    for (const auto& kws : raw.keywords) vocab.insert(kws.begin(), kws.end());
    for (const auto& w : vocab) {
      std::vector<std::uint32_t> want;
      for (std::size_t c = 0; c < raw.n; ++c) {
        for (auto v : testkit::expansion_members(raw, c, r)) {
          const auto& kws = raw.keywords[v];
          if (std::find(kws.begin(), kws.end(), w) != kws.end()) {
            want.push_back(static_cast<std::uint32_t>(c));
            break;
          }
        }
      }
      ASSERT_EQ(ids(idx.postings(w)), want) << w;
    }
  }
}

TEST(Search, AllModeOnTwoNodePath) {
  auto idx = build_index(labelled_path({"apple", "pie"}), config(1));
  const std::vector<std::string> q{"apple pie"};
  auto res = search(idx, q, config(1, MatchMode::all));
  ASSERT_EQ(res.hits.size(), 2u);
  EXPECT_EQ(res.hits[0], (SearchHit{node_id(0), {"apple", "pie"}, 2}));
  EXPECT_EQ(res.hits[1], (SearchHit{node_id(1), {"apple", "pie"}, 2}));
}

TEST(Search, AbsentKeywordGivesEmptyHitsAndPositiveElapsed) {
  auto idx = build_index(labelled_path({"a", "b"}), config(1));
  const std::vector<std::string> q{"nothere"};
  auto res = search(idx, q, config(1));
  EXPECT_TRUE(res.hits.empty());
  EXPECT_GT(res.elapsed.count(), 0);
  EXPECT_EQ(res.visited, 0u);
}

TEST(Search, SingleNodeSingleHit) {
  auto idx = build_index(labelled_path({"x"}), config(2));
  const std::vector<std::string> q{"x"};
  auto res = search(idx, q, config(2));
  ASSERT_EQ(res.hits.size(), 1u);
  EXPECT_EQ(res.hits[0].center, node_id(0));
}

TEST(Search, EmptyQueryAfterNormalizationThrows) {
  auto idx = build_index(labelled_path({"x"}), config(2));
  const std::vector<std::string> q{"  ", "?!"};
  EXPECT_THROW(search(idx, q, config(2)), InvalidInput);
  EXPECT_THROW(search(idx, std::vector<std::string>{}, config(2)), InvalidInput);
}

TEST(Search, RadiusMustMatchIndex) {
  auto idx = build_index(labelled_path({"x"}), config(2));
  const std::vector<std::string> q{"x"};
  EXPECT_THROW(search(idx, q, config(1)), InvalidInput);
}

TEST(Search, RespectsMaxResultsAndRanking) {
  // Star: hub carries "a", leaves carry "a" too. Leaves have 2 members at r=1,
  // the hub has 5, so leaves rank first by member count.
  GraphBuilder b;
  b.add_node(0, {"a"});
  for (int i = 1; i <= 4; ++i) b.add_node(i, {"a"});
  for (int i = 1; i <= 4; ++i) b.add_edge(node_id(0), node_id(i));
  auto idx = build_index(std::move(b).build(), config(1));
  const std::vector<std::string> q{"a"};
  auto res = search(idx, q, config(1, MatchMode::any, 3));
  EXPECT_EQ(ids(std::vector<NodeId>{res.hits[0].center, res.hits[1].center, res.hits[2].center}),
            (std::vector<std::uint32_t>{1, 2, 3}));
  EXPECT_EQ(res.visited, 5u);
}

TEST(Search, MatchesBruteForceOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    auto raw = testkit::random_graph(rng, 80, 10);
    auto g = raw.build();
    for (std::uint32_t r = 1; r <= 3; ++r) {
      auto idx = build_index(g, config(r));
      for (int qn = 0; qn < 4; ++qn) {
        std::vector<std::string> q;
        const auto len = 1 + rng() % 5;
        while (q.size() < len) {
          auto w = "w" + std::to_string(rng() % 12);  // w10, w11 never occur
          if (std::find(q.begin(), q.end(), w) == q.end()) q.push_back(w);
        }
        for (auto mode : {MatchMode::any, MatchMode::all}) {
          const auto m = static_cast<std::uint32_t>(1 + rng() % 12);
          auto got = search(idx, q, config(r, mode, m));
          auto want = testkit::brute_force_search(raw, r, q, mode == MatchMode::all, m);
          ASSERT_EQ(as_oracle(got), want);

          // Pruning: visited candidates lie within the posting-list union and
          // cover the hits.
          std::set<std::uint32_t> uni;
          for (const auto& w : q) {
            for (auto c : idx.postings(w)) uni.insert(index_of(c));
          }
          EXPECT_LE(got.visited, uni.size());
          EXPECT_GE(got.visited, got.hits.size());
        }
      }
    }
  }
}

TEST(Search, AllModeRecallGrowsWithRadius) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    auto raw = testkit::random_graph(rng, 60, 8);
    auto g = raw.build();
    const std::vector<std::string> q{"w" + std::to_string(rng() % 8), "w" + std::to_string(rng() % 8)};
    std::set<std::uint32_t> previous;
    for (std::uint32_t r = 1; r <= 4; ++r) {
      auto idx = build_index(g, config(r));
      auto res = search(idx, q, config(r, MatchMode::all, static_cast<std::uint32_t>(raw.n)));
      std::set<std::uint32_t> now;
      for (const auto& h : res.hits) now.insert(index_of(h.center));
      EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
      previous = now;
    }
  }
}

TEST(Search, SingleKeywordAnyEqualsAllAndIsDeterministic) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    auto raw = testkit::random_graph(rng, 60, 8);
    auto idx = build_index(raw.build(), config(2));
    const std::vector<std::string> q{"w" + std::to_string(rng() % 8)};
    auto any = search(idx, q, config(2, MatchMode::any));
    auto all = search(idx, q, config(2, MatchMode::all));
    auto again = search(idx, q, config(2, MatchMode::any));
    EXPECT_EQ(any.hits, all.hits);
    EXPECT_EQ(any.hits, again.hits);
  }
}

TEST(IndexStats, ThreeNodePath) {
  auto idx = build_index(labelled_path({"a", "b", "c"}), config(1));
  auto s = index_stats(idx);
  EXPECT_EQ(s.distinct_keywords, 3u);
  EXPECT_EQ(s.subgraph_count, 3u);
  EXPECT_EQ(s.total_postings, 7u);
  EXPECT_DOUBLE_EQ(s.mean_members, 7.0 / 3.0);
  EXPECT_EQ(s.size_bytes, idx.size_bytes());
  EXPECT_EQ(index_stats(idx), s);
}

TEST(IndexStats, EmptyGraph) {
  auto idx = build_index(DataGraph{}, config(2));
  auto s = index_stats(idx);
  EXPECT_EQ(s.distinct_keywords, 0u);
  EXPECT_EQ(s.total_postings, 0u);
  EXPECT_EQ(s.subgraph_count, 0u);
  EXPECT_EQ(s.mean_members, 0.0);
  EXPECT_NE(index_stats_json(s).find("\"subgraph_count\": 0"), std::string::npos);
}

TEST(IndexSerialization, SizeMatchesAndRoundTrips) {
  std::mt19937_64 rng(4);
  testkit::TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    auto raw = testkit::random_graph(rng, 50);
    auto idx = build_index(raw.build(), config(2));
    const auto bytes = idx.serialize();
    EXPECT_EQ(bytes.size(), idx.size_bytes());
    idx.save(dir / "i.bin");
    auto back = KeywordIndex::load(dir / "i.bin");
    EXPECT_EQ(back.serialize(), bytes);
    EXPECT_EQ(back.radius(), 2u);
    for (std::size_t i = 0; i < idx.distinct_keywords(); ++i) {
      const auto& w = idx.keyword_at(i);
      EXPECT_EQ(ids(back.postings(w)), ids(idx.postings(w)));
    }
  }
}

TEST(IndexSerialization, CorruptInputIsRejected) {
  auto idx = build_index(labelled_path({"a", "b", "c"}), config(1));
  auto bytes = idx.serialize();
  EXPECT_THROW(KeywordIndex::deserialize(bytes.substr(0, bytes.size() - 1)), InvalidInput);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(KeywordIndex::deserialize(bad_magic), InvalidInput);
  EXPECT_THROW(KeywordIndex::deserialize(bytes + "x"), InvalidInput);

  testkit::TempDir dir;
  auto f = dir.write("bad.bin", bytes.substr(0, 20));
  EXPECT_THROW(KeywordIndex::load(f), ParseError);
}
