#pragma once

// r-radius subgraph index and keyword search over it.
//
// Every node is the center of one subgraph holding all nodes within r hops.
// The index maps each keyword to the sorted list of centers whose subgraph
// contains a node carrying that keyword, and a search only ever looks at the
// centers named by the query's posting lists.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lakebench/graph.hpp"

namespace lakebench {

enum class MatchMode { any, all };

std::string_view to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view text);

struct IndexConfig {
  std::uint32_t radius = 2;
  MatchMode match_mode = MatchMode::any;
  std::uint32_t max_results = 10;

  // Throws InvalidInput unless radius >= 1 and max_results >= 1.
  void validate() const;
};

namespace detail {
class IndexLoader;
}

class KeywordIndex {
 public:
  KeywordIndex() = default;

  std::uint32_t radius() const noexcept { return radius_; }
  std::size_t subgraph_count() const noexcept { return external_ids_.size(); }
  std::size_t distinct_keywords() const noexcept { return keywords_.size(); }
  std::size_t total_postings() const noexcept { return posting_data_.size(); }

  // Keywords in first-seen order; postings(keyword_at(i)) is list i.
  const std::string& keyword_at(std::size_t i) const { return keywords_.at(i); }

  // Sorted, duplicate-free centers. Empty for an unknown keyword.
  std::span<const NodeId> postings(std::string_view keyword) const;

  // Sorted members of the subgraph centered at `center`.
  std::span<const NodeId> members(NodeId center) const;
  RadiusSubgraph subgraph(NodeId center) const;

  ExternalId external_id(NodeId center) const { return external_ids_.at(index_of(center)); }

  std::chrono::nanoseconds build_time() const noexcept { return build_time_; }
  std::uint64_t size_bytes() const noexcept { return size_bytes_; }

  // Binary form (layout in README): magic "LKBIDX", u16 version, then
  // length-prefixed sections of little-endian u32/u64 values.
  std::string serialize() const;
  static KeywordIndex deserialize(std::string_view bytes);

  void save(const std::filesystem::path& file) const;
  static KeywordIndex load(const std::filesystem::path& file);

 private:
  friend KeywordIndex build_index(const DataGraph&, const IndexConfig&);
  friend class detail::IndexLoader;

  std::uint64_t compute_size_bytes() const;

  std::uint32_t radius_ = 0;
  std::vector<ExternalId> external_ids_;

  std::vector<std::string> keywords_;
  KeywordLookup keyword_lookup_;
  std::vector<std::uint64_t> posting_offsets_{0};
  std::vector<NodeId> posting_data_;

  std::vector<std::uint64_t> member_offsets_{0};
  std::vector<NodeId> member_data_;

  std::chrono::nanoseconds build_time_{0};
  std::uint64_t size_bytes_ = 0;
};

KeywordIndex build_index(const DataGraph& graph, const IndexConfig& config);

struct SearchHit {
  NodeId center{};
  std::vector<std::string> matched;  // distinct query keywords present, in query order
  std::uint32_t member_count = 0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct SearchResult {
  std::vector<SearchHit> hits;
  std::chrono::nanoseconds elapsed{0};
  // Number of candidate centers scored. Never exceeds the size of the union
  // of the query's posting lists.
  std::size_t visited = 0;
};

// Ranks candidates by (matched keywords desc, member count asc, center asc)
// and keeps the top config.max_results. The query is tokenized, so entries may
// hold several words; repeated keywords count once. config.radius must equal
// the index radius. Throws InvalidInput on an empty query.
SearchResult search(const KeywordIndex& index, std::span<const std::string> query,
                    const IndexConfig& config);

struct IndexStats {
  std::size_t distinct_keywords = 0;
  std::size_t total_postings = 0;
  std::size_t subgraph_count = 0;
  double mean_members = 0.0;
  std::chrono::nanoseconds build_time{0};
  std::uint64_t size_bytes = 0;

  friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

IndexStats index_stats(const KeywordIndex& index);
std::string index_stats_json(const IndexStats& stats);

}  // namespace lakebench
