#pragma once

// Adapters that turn source datasets into node/edge files, plus the synthetic
// generator and first-N subsampler used for scale sweeps.
//
// Every operation writes `nodes.csv`, `edges.csv` and `ingest_report.json`
// into its output directory (created if missing) and returns the report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lakebench {

inline constexpr const char* kNodesFile = "nodes.csv";
inline constexpr const char* kEdgesFile = "edges.csv";
inline constexpr const char* kIngestReportFile = "ingest_report.json";

struct SkipReason {
  std::string locator;  // e.g. "ratings.csv:17" or "record 3 (byte 812)"
  std::string reason;

  friend bool operator==(const SkipReason&, const SkipReason&) = default;
};

struct IngestReport {
  std::size_t nodes_written = 0;
  std::size_t edges_written = 0;
  std::size_t records_read = 0;
  std::size_t records_accepted = 0;
  std::size_t records_skipped = 0;
  std::vector<SkipReason> skip_reasons;
  // Informational remarks that are not skips, e.g. a clamped scale.
  std::vector<std::string> notes;
};

std::string ingest_report_json(const IngestReport& report);

// Number of source records (papers, nodes) to keep.
struct ScaleSpec {
  std::uint64_t record_count = 1;
};

struct SynthConfig {
  std::uint64_t node_count = 1;
  std::uint64_t vocab_size = 1;
  double zipf_exponent = 1.0;
  std::uint64_t keywords_per_node = 1;
  double mean_degree = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidInput if any invariant fails.
  void validate() const;
};

// movies: movieId,title,genres   ratings: userId,movieId,rating,timestamp
// tags:   userId,movieId,tag,timestamp
// Movie nodes come first in movies.csv order, then user nodes in order of
// first appearance. A zero-byte input counts as an empty table.
IngestReport ingest_movies(const std::filesystem::path& movies_csv,
                           const std::filesystem::path& ratings_csv,
                           const std::filesystem::path& tags_csv,
                           const std::filesystem::path& out_dir);

// Bibliography XML (dblp schema). Each publication record becomes a node, each
// distinct author a node, and each authorship an edge. With a scale, parsing
// stops after the first N publication records.
IngestReport ingest_dblp(const std::filesystem::path& xml_file,
                         const std::filesystem::path& out_dir,
                         std::optional<ScaleSpec> scale = std::nullopt);

// One node per log line (ids 0..L-1 in line order), then one node per distinct
// HHMM bucket; an edge joins each line to its bucket.
IngestReport ingest_apache_log(const std::filesystem::path& log_file,
                               const std::filesystem::path& out_dir);

IngestReport generate_synthetic(const SynthConfig& config, const std::filesystem::path& out_dir);

// Keeps the first N nodes of the file and every edge between two kept nodes.
IngestReport subsample(const std::filesystem::path& nodes_file,
                       const std::filesystem::path& edges_file, ScaleSpec scale,
                       const std::filesystem::path& out_dir);

}  // namespace lakebench
