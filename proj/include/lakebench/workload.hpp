#pragma once

// Keyword statistics and query-suite generation.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lakebench/graph.hpp"

namespace lakebench {

struct FrequencyEntry {
  std::string keyword;
  std::uint64_t count = 0;

  friend bool operator==(const FrequencyEntry&, const FrequencyEntry&) = default;
};

// Entries ordered by count descending, then keyword ascending (bytewise).
struct FrequencyTable {
  std::vector<FrequencyEntry> entries;
  std::uint64_t total_tokens = 0;
};

// Counts occurrences: a keyword listed twice on one node counts twice.
FrequencyTable compute_frequencies(const DataGraph& graph);
FrequencyTable compute_frequencies(const std::filesystem::path& nodes_file);

inline constexpr double kDefaultCutoff = 0.05;

struct KeywordPool {
  std::vector<std::string> keywords;  // most frequent first
  double cutoff_fraction = kDefaultCutoff;
};

// max(1, ceil(fraction * distinct)) for distinct >= 1.
std::size_t pool_size_for(std::size_t distinct, double fraction);

KeywordPool build_pool(const FrequencyTable& table, double cutoff_fraction = kDefaultCutoff);

enum class Policy { random, related };

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);

struct SuiteProvenance {
  Policy policy = Policy::random;
  std::uint64_t seed = 0;
  double cutoff_fraction = kDefaultCutoff;
  std::size_t k = 1;                  // keywords per query
  std::optional<int> radius;          // RELATED only
  // RELATED only: for each query, the positions at which the walk restarted
  // from a fresh seed. Relatedness holds within each segment.
  std::vector<std::vector<std::size_t>> restarts;
  // RELATED only: indices of queries emitted with fewer than k keywords
  // because seeds ran out.
  std::vector<std::size_t> short_queries;

  friend bool operator==(const SuiteProvenance&, const SuiteProvenance&) = default;
};

using Query = std::vector<std::string>;

struct QuerySuite {
  std::string name;
  std::vector<Query> queries;
  SuiteProvenance provenance;

  // Keywords in the largest query; 1 for a single-keyword suite.
  std::size_t max_keywords() const;
};

// `count` one-keyword queries with distinct keywords. Requires count <= |pool|.
QuerySuite gen_single(const KeywordPool& pool, std::size_t count, std::uint64_t seed);

// `count` queries of k distinct pool keywords each. Requires 2 <= k <= |pool|.
QuerySuite gen_multi_random(const KeywordPool& pool, std::size_t k, std::size_t count,
                            std::uint64_t seed);

// Greedy neighborhood walk: start from the most frequent unused seed, then
// repeatedly add the most frequent unchosen pool keyword carried by any node
// within `radius` hops of a node carrying the last chosen keyword. A dead end
// restarts from the next unused seed inside the same query.
QuerySuite gen_multi_related(const DataGraph& graph, const KeywordPool& pool, std::size_t k,
                             std::size_t count, int radius, std::uint64_t seed);

struct WorkloadConfig {
  std::size_t single_count = 10;
  std::vector<std::size_t> multi_counts = {5, 10};  // k per multi suite
  std::size_t multi_query_count = 10;               // queries per multi suite
  Policy policy = Policy::random;
  int radius = 2;
  std::uint64_t seed = 0;
  double cutoff_fraction = kDefaultCutoff;

  void validate() const;
};

// The single suite followed by one multi suite per k, named "single" and
// "multi<k>".
std::vector<QuerySuite> generate_workload(const DataGraph& graph, const WorkloadConfig& config);

// One query per line, keywords separated by single spaces, plus a sidecar
// `<stem>.meta.json` holding the name and provenance.
void write_suite(const QuerySuite& suite, const std::filesystem::path& path);

// Reads the query file and, when present, its sidecar. Without a sidecar the
// name is the file stem and provenance is default.
QuerySuite read_suite(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& suite_file);

}  // namespace lakebench
