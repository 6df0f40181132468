#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lakebench/error.hpp"
#include "lakebench/keyword.hpp"
#include "lakebench/workload.hpp"

namespace lakebench {
namespace {

FrequencyTable sorted_table(std::vector<FrequencyEntry> entries) {
  FrequencyTable table;
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.keyword < b.keyword;
  });
  for (const auto& e : entries) table.total_tokens += e.count;
  table.entries = std::move(entries);
  return table;
}

}  // namespace

FrequencyTable compute_frequencies(const DataGraph& graph) {
  std::vector<std::uint64_t> counts(graph.vocabulary_size(), 0);
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    for (KeywordId kw : graph.keyword_ids(node_id(i))) ++counts[kw];
  }
  std::vector<FrequencyEntry> entries;
  for (KeywordId kw = 0; kw < counts.size(); ++kw) {
    if (counts[kw] > 0) entries.push_back({graph.keyword_text(kw), counts[kw]});
  }
  return sorted_table(std::move(entries));
}

FrequencyTable compute_frequencies(const std::filesystem::path& nodes_file) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for_each_node_record(nodes_file, [&](NodeRecord record, std::size_t) {
    for (const auto& raw : record.keywords) {
      if (is_normalized_keyword(raw)) {
        ++counts[raw];
        continue;
      }
      for (auto& kw : tokenize(raw)) ++counts[std::move(kw)];
    }
  });
  std::vector<FrequencyEntry> entries;
  entries.reserve(counts.size());
  for (auto& [kw, n] : counts) entries.push_back({kw, n});
  return sorted_table(std::move(entries));
}

std::size_t pool_size_for(std::size_t distinct, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidInput("cutoff fraction must be in (0, 1]");
  }
  const double exact = fraction * static_cast<double>(distinct);
  // 0.07 * 100 is 7.000000000000001 in binary; do not round that up to 8.
  const double nearest = std::round(exact);
  const double size = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest
                                                                                : std::ceil(exact);
  return std::max<std::size_t>(1, std::min(distinct, static_cast<std::size_t>(size)));
}

KeywordPool build_pool(const FrequencyTable& table, double cutoff_fraction) {
  if (table.entries.empty()) throw InvalidInput("cannot build a keyword pool from an empty table");
  const auto size = pool_size_for(table.entries.size(), cutoff_fraction);
  KeywordPool pool;
  pool.cutoff_fraction = cutoff_fraction;
  pool.keywords.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pool.keywords.push_back(table.entries[i].keyword);
  return pool;
}

}  // namespace lakebench
