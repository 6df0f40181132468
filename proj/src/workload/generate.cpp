#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "lakebench/error.hpp"
#include "lakebench/rng.hpp"
#include "lakebench/workload.hpp"

namespace lakebench {
namespace {

// First `take` entries of a seeded Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> sample_indices(RandomStream& rng, std::size_t n, std::size_t take) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  return idx;
}

}  // namespace

std::string_view to_string(Policy policy) {
  return policy == Policy::related ? "related" : "random";
}

Policy parse_policy(std::string_view text) {
  if (text == "random") return Policy::random;
  if (text == "related") return Policy::related;
  throw InvalidInput("unknown policy '" + std::string(text) + "' (expected random or related)");
}

std::size_t QuerySuite::max_keywords() const {
  std::size_t m = 0;
  for (const auto& q : queries) m = std::max(m, q.size());
  return m == 0 ? provenance.k : m;
}

QuerySuite gen_single(const KeywordPool& pool, std::size_t count, std::uint64_t seed) {
  if (count > pool.keywords.size()) {
    throw InvalidInput("cannot draw " + std::to_string(count) + " distinct single-keyword queries from a pool of " +
                       std::to_string(pool.keywords.size()) +
                       "; lower the query count or raise the cutoff fraction");
  }
  QuerySuite suite;
  suite.name = "single";
  suite.provenance = {Policy::random, seed, pool.cutoff_fraction, 1, std::nullopt, {}, {}};
  RandomStream rng(seed, "workload.single");
  for (auto i : sample_indices(rng, pool.keywords.size(), count)) {
    suite.queries.push_back({pool.keywords[i]});
  }
  return suite;
}

QuerySuite gen_multi_random(const KeywordPool& pool, std::size_t k, std::size_t count,
                            std::uint64_t seed) {
  if (k < 2) throw InvalidInput("multi-keyword queries need k >= 2");
  if (k > pool.keywords.size()) {
    throw InvalidInput("k=" + std::to_string(k) + " exceeds the keyword pool size " +
                       std::to_string(pool.keywords.size()) + "; raise the cutoff fraction");
  }
  QuerySuite suite;
  suite.name = "multi" + std::to_string(k);
  suite.provenance = {Policy::random, seed, pool.cutoff_fraction, k, std::nullopt, {}, {}};
  RandomStream rng(seed, "workload.multi." + std::to_string(k));
  for (std::size_t q = 0; q < count; ++q) {
    Query query;
    for (auto i : sample_indices(rng, pool.keywords.size(), k)) query.push_back(pool.keywords[i]);
    suite.queries.push_back(std::move(query));
  }
  return suite;
}

QuerySuite gen_multi_related(const DataGraph& graph, const KeywordPool& pool, std::size_t k,
                             std::size_t count, int radius, std::uint64_t seed) {
  if (k < 2) throw InvalidInput("multi-keyword queries need k >= 2");
  if (radius < 1) throw InvalidInput("related queries need radius >= 1");
  const std::size_t P = pool.keywords.size();

  // Pool rank of each graph keyword, or P if the keyword is outside the pool.
  std::vector<std::size_t> rank(graph.vocabulary_size(), P);
  for (std::size_t r = 0; r < P; ++r) {
    if (auto kw = graph.find_keyword(pool.keywords[r])) rank[*kw] = r;
  }
  std::vector<std::vector<NodeId>> carriers(P);
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    for (KeywordId kw : graph.keyword_ids(node_id(i))) {
      const auto r = rank[kw];
      if (r < P && (carriers[r].empty() || carriers[r].back() != node_id(i))) {
        carriers[r].push_back(node_id(i));
      }
    }
  }

  QuerySuite suite;
  suite.name = "multi" + std::to_string(k);
  suite.provenance = {Policy::related, seed, pool.cutoff_fraction, k, radius, {}, {}};

  HopExpander expander(graph);
  std::vector<char> used_as_seed(P, 0);
  std::vector<char> chosen(P, 0);
  for (std::size_t q = 0; q < count; ++q) {
    std::vector<std::size_t> picks;
    std::vector<std::size_t> restarts;
    std::fill(chosen.begin(), chosen.end(), 0);
    std::optional<std::size_t> current;
    while (picks.size() < k) {
      if (!current) {
        std::size_t s = 0;
        while (s < P && (used_as_seed[s] || chosen[s])) ++s;
        if (s == P) break;
        used_as_seed[s] = 1;
        if (!picks.empty()) restarts.push_back(picks.size());
        picks.push_back(s);
        chosen[s] = 1;
        current = s;
        continue;
      }
      std::size_t best = P;
      for (NodeId v : expander.expand(carriers[*current], static_cast<std::uint32_t>(radius))) {
        for (KeywordId kw : graph.keyword_ids(v)) {
          const auto r = rank[kw];
          if (r < best && !chosen[r]) best = r;
        }
      }
      if (best == P) {
        current.reset();
        continue;
      }
      picks.push_back(best);
      chosen[best] = 1;
      current = best;
    }
    if (picks.empty()) {
      throw InvalidInput("keyword pool exhausted: no unused seed keyword left for query " +
                         std::to_string(q + 1) + " of " + std::to_string(count));
    }
    if (picks.size() < k) suite.provenance.short_queries.push_back(q);
    Query query;
    for (auto r : picks) query.push_back(pool.keywords[r]);
    suite.queries.push_back(std::move(query));
    suite.provenance.restarts.push_back(std::move(restarts));
  }
  return suite;
}

void WorkloadConfig::validate() const {
  for (auto k : multi_counts) {
    if (k < 2) throw InvalidInput("each multi-keyword k must be at least 2");
  }
  if (radius < 1) throw InvalidInput("workload radius must be at least 1");
  if (!(cutoff_fraction > 0.0 && cutoff_fraction <= 1.0)) {
    throw InvalidInput("cutoff fraction must be in (0, 1]");
  }
}

std::vector<QuerySuite> generate_workload(const DataGraph& graph, const WorkloadConfig& config) {
  config.validate();
  const auto pool = build_pool(compute_frequencies(graph), config.cutoff_fraction);
  std::vector<QuerySuite> suites;
  suites.push_back(gen_single(pool, config.single_count, config.seed));
  for (auto k : config.multi_counts) {
    suites.push_back(config.policy == Policy::related
                         ? gen_multi_related(graph, pool, k, config.multi_query_count,
                                             config.radius, config.seed)
                         : gen_multi_random(pool, k, config.multi_query_count, config.seed));
  }
  return suites;
}

}  // namespace lakebench
