#include "lakebench/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>

#include "lakebench/error.hpp"
#include "lakebench/io.hpp"
#include "lakebench/keyword.hpp"

namespace lakebench {

namespace fs = std::filesystem;

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::optional<ExternalId> parse_id(std::string_view text) {
  if (text.empty()) return std::nullopt;
  ExternalId value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void append_id(std::string& out, ExternalId id) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, id);
  out.append(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// DataGraph

std::span<const NodeId> DataGraph::neighbors(NodeId id) const {
  const auto i = index_of(id);
  return {targets_.data() + offsets_.at(i), targets_.data() + offsets_.at(i + 1)};
}

std::span<const KeywordId> DataGraph::keyword_ids(NodeId id) const {
  const auto i = index_of(id);
  return {keyword_bag_.data() + keyword_offsets_.at(i),
          keyword_bag_.data() + keyword_offsets_.at(i + 1)};
}

std::vector<std::string> DataGraph::keywords(NodeId id) const {
  std::vector<std::string> out;
  for (KeywordId kw : keyword_ids(id)) out.push_back(vocabulary_[kw]);
  return out;
}

std::optional<KeywordId> DataGraph::find_keyword(std::string_view keyword) const {
  auto it = keyword_lookup_.find(keyword);
  if (it == keyword_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> DataGraph::find_node(ExternalId external) const {
  auto it = by_external_.find(external);
  if (it == by_external_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const DataGraph& a, const DataGraph& b) {
  if (a.external_ids_ != b.external_ids_ || a.offsets_ != b.offsets_ ||
      a.targets_ != b.targets_ || a.keyword_offsets_ != b.keyword_offsets_) {
    return false;
  }
  for (std::size_t i = 0; i < a.keyword_bag_.size(); ++i) {
    if (a.vocabulary_[a.keyword_bag_[i]] != b.vocabulary_[b.keyword_bag_[i]]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// GraphBuilder

KeywordId GraphBuilder::intern(std::string_view keyword) {
  auto& g = graph_;
  if (auto it = g.keyword_lookup_.find(keyword); it != g.keyword_lookup_.end()) {
    return it->second;
  }
  const auto id = static_cast<KeywordId>(g.vocabulary_.size());
  g.vocabulary_.emplace_back(keyword);
  g.keyword_lookup_.emplace(g.vocabulary_.back(), id);
  return id;
}

NodeId GraphBuilder::add_node(ExternalId external, std::span<const std::string> keywords) {
  auto& g = graph_;
  if (g.external_ids_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("graph exceeds the maximum node count");
  }
  const NodeId id = node_id(g.external_ids_.size());
  if (!g.by_external_.emplace(external, id).second) {
    throw IntegrityError(external, "duplicate node id " + std::to_string(external));
  }
  g.external_ids_.push_back(external);

  const auto before = g.keyword_bag_.size();
  for (const auto& raw : keywords) {
    if (is_normalized_keyword(raw)) {
      g.keyword_bag_.push_back(intern(raw));
      continue;
    }
    for (const auto& kw : tokenize(raw)) g.keyword_bag_.push_back(intern(kw));
  }
  if (g.keyword_bag_.size() == before) ++g.stats_.empty_keyword_nodes;
  g.keyword_offsets_.push_back(static_cast<std::uint32_t>(g.keyword_bag_.size()));
  return id;
}

void GraphBuilder::add_edge(NodeId a, NodeId b) {
  const auto n = graph_.external_ids_.size();
  for (NodeId end : {a, b}) {
    if (index_of(end) >= n) {
      throw IntegrityError(index_of(end), "edge references unknown node " +
                                              std::to_string(index_of(end)));
    }
  }
  if (a == b) {
    const auto ext = graph_.external_ids_[index_of(a)];
    throw IntegrityError(ext, "self-loop on node " + std::to_string(ext));
  }
  if (b < a) std::swap(a, b);
  edges_.emplace_back(a, b);
}

std::optional<NodeId> GraphBuilder::find_node(ExternalId external) const {
  return graph_.find_node(external);
}

DataGraph GraphBuilder::build() && {
  std::sort(edges_.begin(), edges_.end());
  const auto unique_end = std::unique(edges_.begin(), edges_.end());
  graph_.stats_.duplicate_edges += static_cast<std::size_t>(edges_.end() - unique_end);
  edges_.erase(unique_end, edges_.end());

  const auto n = graph_.external_ids_.size();
  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& [a, b] : edges_) {
    ++degree[index_of(a)];
    ++degree[index_of(b)];
  }
  auto& offsets = graph_.offsets_;
  offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + degree[i];

  auto& targets = graph_.targets_;
  targets.assign(offsets[n], NodeId{});
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  // Forward and back references interleave, so each list needs a final sort.
  for (const auto& [a, b] : edges_) {
    targets[cursor[index_of(a)]++] = b;
    targets[cursor[index_of(b)]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
  }

  edges_.clear();
  return std::move(graph_);
}

// ---------------------------------------------------------------------------
// File formats

std::optional<NodeRecord> parse_node_line(std::string_view line) {
  line = strip_cr(line);
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto id = parse_id(line.substr(0, comma));
  if (!id) return std::nullopt;
  return NodeRecord{*id, tokenize(line.substr(comma + 1))};
}

DataGraph load_graph(const fs::path& nodes_file, const fs::path& edges_file) {
  GraphBuilder builder;
  for_each_node_record(nodes_file, [&](NodeRecord record, std::size_t line_no) {
    if (builder.find_node(record.id)) {
      throw ParseError(nodes_file, line_no, "duplicate node id " + std::to_string(record.id));
    }
    builder.add_node(record.id, record.keywords);
  });

  std::ifstream in(edges_file, std::ios::binary);
  if (!in) throw IoError(edges_file, "cannot open edge file");
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    const auto comma = line.find(',');
    std::optional<ExternalId> a, b;
    if (comma != std::string_view::npos) {
      a = parse_id(line.substr(0, comma));
      b = parse_id(line.substr(comma + 1));
    }
    if (!a || !b) throw ParseError(edges_file, line_no, "expected '<id>,<id>'");

    const auto where = edges_file.string() + ":" + std::to_string(line_no) + ": ";
    auto na = builder.find_node(*a);
    if (!na) throw IntegrityError(*a, where + "edge references unknown node id " + std::to_string(*a));
    auto nb = builder.find_node(*b);
    if (!nb) throw IntegrityError(*b, where + "edge references unknown node id " + std::to_string(*b));
    if (*a == *b) throw IntegrityError(*a, where + "self-loop on node id " + std::to_string(*a));
    builder.add_edge(*na, *nb);
  }
  if (in.bad()) throw IoError(edges_file, "read failed");
  return std::move(builder).build();
}

void save_graph(const DataGraph& graph, const fs::path& nodes_file, const fs::path& edges_file) {
  std::string nodes;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const NodeId id = node_id(i);
    append_id(nodes, graph.external_id(id));
    nodes.push_back(',');
    bool first = true;
    for (KeywordId kw : graph.keyword_ids(id)) {
      if (!first) nodes.push_back(' ');
      nodes += graph.keyword_text(kw);
      first = false;
    }
    nodes.push_back('\n');
  }

  std::vector<std::pair<ExternalId, ExternalId>> pairs;
  pairs.reserve(graph.edge_count());
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto a = graph.external_id(node_id(i));
    for (NodeId nb : graph.neighbors(node_id(i))) {
      const auto b = graph.external_id(nb);
      if (a < b) pairs.emplace_back(a, b);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::string edges;
  for (const auto& [a, b] : pairs) {
    append_id(edges, a);
    edges.push_back(',');
    append_id(edges, b);
    edges.push_back('\n');
  }

  write_file_atomic(nodes_file, nodes);
  write_file_atomic(edges_file, edges);
}

// ---------------------------------------------------------------------------
// Traversal

HopExpander::HopExpander(const DataGraph& graph)
    : graph_(&graph), stamp_(graph.node_count(), 0) {}

std::span<const NodeId> HopExpander::expand(std::span<const NodeId> sources,
                                            std::uint32_t radius) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  order_.clear();
  for (NodeId s : sources) {
    auto& st = stamp_[index_of(s)];
    if (st != epoch_) {
      st = epoch_;
      order_.push_back(s);
    }
  }
  std::size_t level_begin = 0;
  for (std::uint32_t depth = 0; depth < radius; ++depth) {
    const std::size_t level_end = order_.size();
    if (level_begin == level_end) break;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (NodeId nb : graph_->neighbors(order_[i])) {
        auto& st = stamp_[index_of(nb)];
        if (st != epoch_) {
          st = epoch_;
          order_.push_back(nb);
        }
      }
    }
    level_begin = level_end;
  }
  return order_;
}

RadiusSubgraph radius_subgraph(const DataGraph& graph, NodeId center, int radius) {
  if (!graph.contains(center)) {
    throw InvalidInput("unknown center node " + std::to_string(index_of(center)));
  }
  if (radius < 0) throw InvalidInput("radius must be non-negative, got " + std::to_string(radius));
  HopExpander expander(graph);
  auto reached = expander.expand(center, static_cast<std::uint32_t>(radius));
  RadiusSubgraph sub{center, static_cast<std::uint32_t>(radius), {reached.begin(), reached.end()}};
  std::sort(sub.members.begin(), sub.members.end());
  return sub;
}

std::optional<std::uint32_t> hop_distance(const DataGraph& graph, NodeId a, NodeId b) {
  for (NodeId id : {a, b}) {
    if (!graph.contains(id)) {
      throw InvalidInput("unknown node " + std::to_string(index_of(id)));
    }
  }
  if (a == b) return 0;
  std::vector<std::uint32_t> dist(graph.node_count(), std::numeric_limits<std::uint32_t>::max());
  std::vector<NodeId> frontier{a};
  dist[index_of(a)] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId u = frontier[head];
    for (NodeId v : graph.neighbors(u)) {
      if (dist[index_of(v)] != std::numeric_limits<std::uint32_t>::max()) continue;
      dist[index_of(v)] = dist[index_of(u)] + 1;
      if (v == b) return dist[index_of(v)];
      frontier.push_back(v);
    }
  }
  return std::nullopt;
}

}  // namespace lakebench
