#include <algorithm>
#include <cstring>
#include <limits>

#include "json.hpp"
#include "lakebench/ease.hpp"
#include "lakebench/error.hpp"
#include "lakebench/io.hpp"

namespace lakebench {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[6] = {'L', 'K', 'B', 'I', 'D', 'X'};
constexpr std::uint16_t kVersion = 1;
constexpr int kSectionCount = 4;

// Little-endian writer. All integers in the index file go through here.
class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

  void bytes(const void* data, std::size_t n) {
    out_.append(static_cast<const char*>(data), n);
  }
  template <typename T>
  void uint(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
    }
  }
  // Reserves a u64 length slot; finish_section fills it in.
  std::size_t begin_section() {
    const auto at = out_.size();
    uint<std::uint64_t>(0);
    return at;
  }
  void finish_section(std::size_t at) {
    const std::uint64_t len = out_.size() - at - 8;
    for (std::size_t i = 0; i < 8; ++i) out_[at + i] = static_cast<char>((len >> (8 * i)) & 0xff);
  }
  std::string take() && { return std::move(out_); }

 private:
  std::string out_;
};

struct CorruptIndex {
  std::uint64_t offset;
  std::string what;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  template <typename T>
  T uint() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }
  [[noreturn]] void fail(const std::string& what) const { throw CorruptIndex{pos_, what}; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("unexpected end of index data");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(MatchMode mode) { return mode == MatchMode::all ? "all" : "any"; }

MatchMode parse_match_mode(std::string_view text) {
  if (text == "any" || text == "ANY") return MatchMode::any;
  if (text == "all" || text == "ALL") return MatchMode::all;
  throw InvalidInput("unknown match mode '" + std::string(text) + "' (expected any or all)");
}

void IndexConfig::validate() const {
  if (radius < 1) throw InvalidInput("index radius must be >= 1");
  if (max_results < 1) throw InvalidInput("max_results must be >= 1");
}

std::span<const NodeId> KeywordIndex::postings(std::string_view keyword) const {
  auto it = keyword_lookup_.find(keyword);
  if (it == keyword_lookup_.end()) return {};
  const auto i = it->second;
  return {posting_data_.data() + posting_offsets_[i], posting_data_.data() + posting_offsets_[i + 1]};
}

std::span<const NodeId> KeywordIndex::members(NodeId center) const {
  const auto i = index_of(center);
  if (i >= subgraph_count()) throw InvalidInput("unknown center " + std::to_string(i));
  return {member_data_.data() + member_offsets_[i], member_data_.data() + member_offsets_[i + 1]};
}

RadiusSubgraph KeywordIndex::subgraph(NodeId center) const {
  auto m = members(center);
  return RadiusSubgraph{center, radius_, {m.begin(), m.end()}};
}

std::uint64_t KeywordIndex::compute_size_bytes() const {
  std::uint64_t size = sizeof kMagic + sizeof kVersion + sizeof(std::uint32_t);
  size += kSectionCount * sizeof(std::uint64_t);
  size += 8 + 8 * external_ids_.size();
  size += 8;
  for (const auto& kw : keywords_) size += 4 + kw.size();
  size += 4 * keywords_.size() + 4 * posting_data_.size();
  size += 4 * external_ids_.size() + 4 * member_data_.size();
  return size;
}

KeywordIndex build_index(const DataGraph& graph, const IndexConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  KeywordIndex index;
  const auto n = graph.node_count();
  const auto vocab = graph.vocabulary_size();
  index.radius_ = config.radius;
  index.external_ids_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index.external_ids_.push_back(graph.external_id(node_id(i)));
  index.keywords_.reserve(vocab);
  for (KeywordId kw = 0; kw < vocab; ++kw) {
    index.keywords_.push_back(graph.keyword_text(kw));
    index.keyword_lookup_.emplace(index.keywords_.back(), kw);
  }

  std::vector<std::vector<NodeId>> lists(vocab);
  std::vector<std::uint32_t> seen(vocab, std::numeric_limits<std::uint32_t>::max());
  HopExpander expander(graph);
  index.member_offsets_.reserve(n + 1);
  for (std::size_t c = 0; c < n; ++c) {
    const NodeId center = node_id(c);
    const auto reached = expander.expand(center, config.radius);
    const auto first = index.member_data_.size();
    index.member_data_.insert(index.member_data_.end(), reached.begin(), reached.end());
    std::sort(index.member_data_.begin() + static_cast<std::ptrdiff_t>(first),
              index.member_data_.end());
    index.member_offsets_.push_back(index.member_data_.size());

    for (NodeId v : reached) {
      for (KeywordId kw : graph.keyword_ids(v)) {
        if (seen[kw] == c) continue;
        seen[kw] = static_cast<std::uint32_t>(c);
        lists[kw].push_back(center);  // centers ascend, so lists stay sorted
      }
    }
  }

  index.posting_offsets_.reserve(vocab + 1);
  for (auto& list : lists) {
    index.posting_data_.insert(index.posting_data_.end(), list.begin(), list.end());
    index.posting_offsets_.push_back(index.posting_data_.size());
    std::vector<NodeId>().swap(list);
  }

  index.size_bytes_ = index.compute_size_bytes();
  index.build_time_ = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return index;
}

std::string KeywordIndex::serialize() const {
  ByteWriter w(size_bytes_);
  w.bytes(kMagic, sizeof kMagic);
  w.uint(kVersion);
  w.uint(radius_);

  auto s = w.begin_section();
  w.uint<std::uint64_t>(external_ids_.size());
  for (auto id : external_ids_) w.uint<std::uint64_t>(id);
  w.finish_section(s);

  s = w.begin_section();
  w.uint<std::uint64_t>(keywords_.size());
  for (const auto& kw : keywords_) {
    w.uint(static_cast<std::uint32_t>(kw.size()));
    w.bytes(kw.data(), kw.size());
  }
  w.finish_section(s);

  s = w.begin_section();
  for (std::size_t i = 0; i < keywords_.size(); ++i) {
    w.uint(static_cast<std::uint32_t>(posting_offsets_[i + 1] - posting_offsets_[i]));
    for (auto p = posting_offsets_[i]; p < posting_offsets_[i + 1]; ++p) {
      w.uint(index_of(posting_data_[p]));
    }
  }
  w.finish_section(s);

  s = w.begin_section();
  for (std::size_t i = 0; i < external_ids_.size(); ++i) {
    w.uint(static_cast<std::uint32_t>(member_offsets_[i + 1] - member_offsets_[i]));
    for (auto p = member_offsets_[i]; p < member_offsets_[i + 1]; ++p) {
      w.uint(index_of(member_data_[p]));
    }
  }
  w.finish_section(s);
  return std::move(w).take();
}

namespace {

KeywordIndex deserialize_or_throw(std::string_view bytes, const fs::path* file);

}  // namespace

KeywordIndex KeywordIndex::deserialize(std::string_view bytes) {
  return deserialize_or_throw(bytes, nullptr);
}

void KeywordIndex::save(const fs::path& file) const { write_file_atomic(file, serialize()); }

KeywordIndex KeywordIndex::load(const fs::path& file) {
  const auto bytes = read_file(file);
  return deserialize_or_throw(bytes, &file);
}

namespace {

// Reads a sorted list of `count` node indices, each < bound.
void read_id_list(ByteReader& r, std::uint32_t count, std::size_t bound, std::vector<NodeId>& out) {
  std::uint32_t prev = 0;
  for (std::uint32_t j = 0; j < count; ++j) {
    const auto v = r.uint<std::uint32_t>();
    if (v >= bound) r.fail("node index out of range");
    if (j > 0 && v <= prev) r.fail("list not strictly ascending");
    out.push_back(node_id(v));
    prev = v;
  }
}

}  // namespace

namespace detail {

class IndexLoader {
 public:
  static KeywordIndex read(std::string_view bytes);
};

}  // namespace detail

namespace {

KeywordIndex deserialize_or_throw(std::string_view bytes, const fs::path* file) {
  try {
    return detail::IndexLoader::read(bytes);
  } catch (const CorruptIndex& e) {
    if (file) throw ParseError::at_offset(*file, e.offset, e.what);
    throw InvalidInput("corrupt index at byte " + std::to_string(e.offset) + ": " + e.what);
  }
}

}  // namespace

KeywordIndex detail::IndexLoader::read(std::string_view bytes) {
  ByteReader r(bytes);
  KeywordIndex idx;
  if (r.bytes(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) r.fail("bad magic");
  if (r.uint<std::uint16_t>() != kVersion) r.fail("unsupported index version");
  idx.radius_ = r.uint<std::uint32_t>();

  auto section = [&r]() {
    const auto len = r.uint<std::uint64_t>();
    return r.pos() + len;
  };
  auto end_section = [&r](std::uint64_t end) {
    if (r.pos() != end) r.fail("section length mismatch");
  };

  auto end = section();
  const auto n = r.uint<std::uint64_t>();
  if (n > std::numeric_limits<std::uint32_t>::max()) r.fail("too many nodes");
  for (std::uint64_t i = 0; i < n; ++i) idx.external_ids_.push_back(r.uint<std::uint64_t>());
  end_section(end);

  end = section();
  const auto k = r.uint<std::uint64_t>();
  for (std::uint64_t i = 0; i < k; ++i) {
    const auto len = r.uint<std::uint32_t>();
    idx.keywords_.emplace_back(r.bytes(len));
    if (!idx.keyword_lookup_.emplace(idx.keywords_.back(), static_cast<KeywordId>(i)).second) {
      r.fail("duplicate keyword");
    }
  }
  end_section(end);

  end = section();
  for (std::uint64_t i = 0; i < k; ++i) {
    read_id_list(r, r.uint<std::uint32_t>(), n, idx.posting_data_);
    idx.posting_offsets_.push_back(idx.posting_data_.size());
  }
  end_section(end);

  end = section();
  for (std::uint64_t i = 0; i < n; ++i) {
    read_id_list(r, r.uint<std::uint32_t>(), n, idx.member_data_);
    idx.member_offsets_.push_back(idx.member_data_.size());
  }
  end_section(end);
  if (!r.done()) r.fail("trailing bytes after index");

  idx.size_bytes_ = idx.compute_size_bytes();
  return idx;
}

IndexStats index_stats(const KeywordIndex& index) {
  IndexStats s;
  s.distinct_keywords = index.distinct_keywords();
  s.total_postings = index.total_postings();
  s.subgraph_count = index.subgraph_count();
  if (s.subgraph_count > 0) {
    std::size_t members = 0;
    for (std::size_t c = 0; c < s.subgraph_count; ++c) members += index.members(node_id(c)).size();
    s.mean_members = static_cast<double>(members) / static_cast<double>(s.subgraph_count);
  }
  s.build_time = index.build_time();
  s.size_bytes = index.size_bytes();
  return s;
}

std::string index_stats_json(const IndexStats& stats) {
  nlohmann::ordered_json j;
  j["distinct_keywords"] = stats.distinct_keywords;
  j["total_postings"] = stats.total_postings;
  j["subgraph_count"] = stats.subgraph_count;
  j["mean_members"] = stats.mean_members;
  j["build_time_ns"] = stats.build_time.count();
  j["size_bytes"] = stats.size_bytes;
  return j.dump(2);
}

}  // namespace lakebench
