#include <algorithm>
#include <queue>

#include "lakebench/ease.hpp"
#include "lakebench/error.hpp"
#include "lakebench/keyword.hpp"

namespace lakebench {
namespace {

struct Candidate {
  NodeId center;
  std::uint32_t matched;
  std::uint32_t members;
};

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.matched != b.matched) return a.matched > b.matched;
  if (a.members != b.members) return a.members < b.members;
  return a.center < b.center;
}

std::vector<std::string> distinct_terms(std::span<const std::string> query) {
  std::vector<std::string> terms;
  for (const auto& entry : query) {
    for (auto& kw : tokenize(entry)) {
      if (std::find(terms.begin(), terms.end(), kw) == terms.end()) terms.push_back(std::move(kw));
    }
  }
  return terms;
}

// First position >= target in [pos, list.end()), searching exponentially
// outward from pos. Lists are walked in ascending target order.
std::size_t gallop(std::span<const NodeId> list, std::size_t pos, NodeId target) {
  std::size_t step = 1;
  std::size_t hi = pos;
  while (hi < list.size() && list[hi] < target) {
    pos = hi + 1;
    hi += step;
    step *= 2;
  }
  hi = std::min(hi, list.size());
  return static_cast<std::size_t>(
      std::lower_bound(list.begin() + static_cast<std::ptrdiff_t>(pos),
                       list.begin() + static_cast<std::ptrdiff_t>(hi), target) -
      list.begin());
}

void intersect(const KeywordIndex& index, std::vector<std::span<const NodeId>> lists,
               std::vector<Candidate>& out) {
  std::sort(lists.begin(), lists.end(),
            [](auto a, auto b) { return a.size() < b.size(); });
  if (lists.front().empty()) return;
  const auto k = static_cast<std::uint32_t>(lists.size());
  std::vector<std::size_t> cursor(lists.size(), 0);
  for (NodeId c : lists.front()) {
    bool in_all = true;
    for (std::size_t i = 1; i < lists.size(); ++i) {
      cursor[i] = gallop(lists[i], cursor[i], c);
      if (cursor[i] == lists[i].size()) return;
      if (lists[i][cursor[i]] != c) {
        in_all = false;
        break;
      }
    }
    if (in_all) out.push_back({c, k, static_cast<std::uint32_t>(index.members(c).size())});
  }
}

void unite(const KeywordIndex& index, const std::vector<std::span<const NodeId>>& lists,
           std::vector<Candidate>& out) {
  using Head = std::pair<NodeId, std::size_t>;  // (center, list)
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
  std::vector<std::size_t> cursor(lists.size(), 0);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (!lists[i].empty()) heap.emplace(lists[i][0], i);
  }
  while (!heap.empty()) {
    const NodeId c = heap.top().first;
    std::uint32_t matched = 0;
    while (!heap.empty() && heap.top().first == c) {
      const auto i = heap.top().second;
      heap.pop();
      ++matched;
      if (++cursor[i] < lists[i].size()) heap.emplace(lists[i][cursor[i]], i);
    }
    out.push_back({c, matched, static_cast<std::uint32_t>(index.members(c).size())});
  }
}

}  // namespace

SearchResult search(const KeywordIndex& index, std::span<const std::string> query,
                    const IndexConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (config.radius != index.radius()) {
    throw InvalidInput("search radius " + std::to_string(config.radius) +
                       " does not match index radius " + std::to_string(index.radius()));
  }

  const auto terms = distinct_terms(query);
  if (terms.empty()) throw InvalidInput("empty query after normalization");

  std::vector<std::span<const NodeId>> lists;
  lists.reserve(terms.size());
  for (const auto& t : terms) lists.push_back(index.postings(t));

  std::vector<Candidate> candidates;
  if (config.match_mode == MatchMode::all) {
    intersect(index, lists, candidates);
  } else {
    unite(index, lists, candidates);
  }

  SearchResult result;
  result.visited = candidates.size();
  const std::size_t keep = std::min<std::size_t>(candidates.size(), config.max_results);
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), ranks_before);
  candidates.resize(keep);

  result.hits.reserve(keep);
  for (const auto& c : candidates) {
    SearchHit hit{c.center, {}, c.members};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (std::binary_search(lists[i].begin(), lists[i].end(), c.center)) {
        hit.matched.push_back(terms[i]);
      }
    }
    result.hits.push_back(std::move(hit));
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace lakebench
