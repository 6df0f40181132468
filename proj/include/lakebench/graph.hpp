#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lakebench {

// Dense 0-based node index, assigned in node-file order.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t index_of(NodeId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr NodeId node_id(std::size_t index) noexcept {
  return static_cast<NodeId>(static_cast<std::uint32_t>(index));
}

// The id as written in a node file. May be sparse (e.g. after subsampling).
using ExternalId = std::uint64_t;

// Index into a graph's keyword vocabulary.
using KeywordId = std::uint32_t;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using KeywordLookup = std::unordered_map<std::string, KeywordId, StringHash, std::equal_to<>>;

struct LoadStats {
  std::size_t empty_keyword_nodes = 0;
  std::size_t duplicate_edges = 0;
};

// Undirected simple graph whose nodes carry keyword bags. Immutable once built;
// safe for concurrent readers.
class DataGraph {
 public:
  DataGraph() = default;

  std::size_t node_count() const noexcept { return external_ids_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  bool contains(NodeId id) const noexcept { return index_of(id) < node_count(); }

  // Sorted, duplicate-free.
  std::span<const NodeId> neighbors(NodeId id) const;

  // Keyword bag in file order; duplicates preserved.
  std::span<const KeywordId> keyword_ids(NodeId id) const;
  std::vector<std::string> keywords(NodeId id) const;

  std::size_t vocabulary_size() const noexcept { return vocabulary_.size(); }
  const std::string& keyword_text(KeywordId kw) const { return vocabulary_.at(kw); }
  std::optional<KeywordId> find_keyword(std::string_view keyword) const;

  ExternalId external_id(NodeId id) const { return external_ids_.at(index_of(id)); }
  std::optional<NodeId> find_node(ExternalId external) const;

  const LoadStats& load_stats() const noexcept { return stats_; }

  // Structural equality: node order, external ids, keyword bags and edges.
  friend bool operator==(const DataGraph& a, const DataGraph& b);

 private:
  friend class GraphBuilder;

  std::vector<ExternalId> external_ids_;
  std::unordered_map<ExternalId, NodeId> by_external_;

  std::vector<std::string> vocabulary_;
  KeywordLookup keyword_lookup_;
  std::vector<std::uint32_t> keyword_offsets_{0};
  std::vector<KeywordId> keyword_bag_;

  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> targets_;

  LoadStats stats_;
};

// Accumulates nodes and edges, then produces a DataGraph that satisfies every
// graph invariant. Duplicate edges (in either direction) collapse silently;
// self-loops and unknown endpoints throw.
class GraphBuilder {
 public:
  // Keywords are run through tokenize(), so raw text is accepted.
  NodeId add_node(ExternalId external, std::span<const std::string> keywords);
  NodeId add_node(ExternalId external, std::initializer_list<std::string> keywords) {
    return add_node(external, std::span<const std::string>(keywords.begin(), keywords.size()));
  }

  void add_edge(NodeId a, NodeId b);

  std::optional<NodeId> find_node(ExternalId external) const;
  std::size_t node_count() const noexcept { return graph_.external_ids_.size(); }

  DataGraph build() &&;

 private:
  KeywordId intern(std::string_view keyword);

  DataGraph graph_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
};

// Node file lines are `<id>,<kw1 kw2 ...>`; edge file lines are `<a>,<b>`.
DataGraph load_graph(const std::filesystem::path& nodes_file,
                     const std::filesystem::path& edges_file);

// Writes nodes in NodeId order and each undirected edge once as
// `<smaller external id>,<larger external id>`, sorted.
void save_graph(const DataGraph& graph, const std::filesystem::path& nodes_file,
                const std::filesystem::path& edges_file);

// One line of a node file, parsed. Shared with the workload and subsample
// readers, which stream node files without building a graph.
struct NodeRecord {
  ExternalId id = 0;
  std::vector<std::string> keywords;
};

// Calls visit(record, line_number) for every line; throws ParseError on
// malformed lines.
template <typename Visitor>
void for_each_node_record(const std::filesystem::path& nodes_file, Visitor&& visit);

std::optional<NodeRecord> parse_node_line(std::string_view line);

struct RadiusSubgraph {
  NodeId center{};
  std::uint32_t radius = 0;
  std::vector<NodeId> members;  // sorted; contains center

  friend bool operator==(const RadiusSubgraph&, const RadiusSubgraph&) = default;
};

RadiusSubgraph radius_subgraph(const DataGraph& graph, NodeId center, int radius);

// Shortest path length in edges, or nullopt if b is unreachable from a.
std::optional<std::uint32_t> hop_distance(const DataGraph& graph, NodeId a, NodeId b);

// Reusable hop-bounded breadth-first expansion. Keeps per-node stamps so
// repeated expansions cost O(visited) rather than O(n).
class HopExpander {
 public:
  explicit HopExpander(const DataGraph& graph);

  // Every node within `radius` hops of some source, in discovery order. The
  // returned span is valid until the next call.
  std::span<const NodeId> expand(std::span<const NodeId> sources, std::uint32_t radius);
  std::span<const NodeId> expand(NodeId source, std::uint32_t radius) {
    return expand(std::span<const NodeId>(&source, 1), radius);
  }

 private:
  const DataGraph* graph_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> order_;
};

}  // namespace lakebench

#include "lakebench/detail/node_reader.hpp"
