#pragma once

// Scale-factor sweeps: per scale, prepare data, time graph load, index build
// and query suites, and collect everything in a BenchReport.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lakebench/ease.hpp"
#include "lakebench/ingest.hpp"
#include "lakebench/workload.hpp"

namespace lakebench {

// Monotonic time in nanoseconds. Tests inject a fake.
using Clock = std::function<std::int64_t()>;
Clock steady_clock_ns();

// Node/edge files subsampled to the first N nodes.
struct GraphFileSource {
  std::filesystem::path nodes;
  std::filesystem::path edges;
};
// Synthetic graph with node_count = N; the other fields come from `base`.
struct SyntheticSource {
  SynthConfig base;
};
// Bibliography XML ingested with scale N (first N publication records).
struct DblpSource {
  std::filesystem::path xml;
};
using DataSource = std::variant<GraphFileSource, SyntheticSource, DblpSource>;

struct BenchPlan {
  std::vector<std::uint64_t> scales = {2000, 4000, 8000, 16000, 32000, 64000};
  std::vector<QuerySuite> suites;
  IndexConfig index_config;
  std::size_t repetitions = 3;
  std::size_t warmup_runs = 1;

  void validate() const;
};

struct SuiteTiming {
  std::string name;
  std::size_t max_keywords = 0;  // 0 when unknown (e.g. read back from CSV)
  std::int64_t total_ns = 0;     // sum of per_query_ns
  std::vector<std::int64_t> per_query_ns;

  friend bool operator==(const SuiteTiming&, const SuiteTiming&) = default;
};

struct ScaleEntry {
  std::uint64_t scale = 0;            // as requested
  std::uint64_t effective_scale = 0;  // after clamping to the dataset
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::int64_t graph_build_ns = 0;
  std::int64_t index_build_ns = 0;
  std::uint64_t index_size_bytes = 0;
  std::string error;  // empty on success
  std::vector<SuiteTiming> suites;

  friend bool operator==(const ScaleEntry&, const ScaleEntry&) = default;
};

struct Environment {
  std::string host;
  std::string timestamp;
  std::string tool_version;

  friend bool operator==(const Environment&, const Environment&) = default;
};

struct BenchReport {
  Environment environment;
  std::vector<std::string> warnings;
  std::vector<ScaleEntry> scales;

  bool any_failed() const;
  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

Environment current_environment();

struct BenchOptions {
  // Per-scale data goes to work_dir/scale_<N>. Empty: a temporary directory
  // that is removed afterwards.
  std::filesystem::path work_dir;
  Clock clock = steady_clock_ns();
};

// Failures at one scale are recorded in that entry's `error` and the sweep
// moves on; invalid plans throw.
BenchReport run_bench(const BenchPlan& plan, const DataSource& source,
                      const BenchOptions& options = {});

// Middle value for odd counts; for even counts, the mean of the two middle
// values rounded toward zero.
std::int64_t median_ns(std::vector<std::int64_t> samples);

enum class ReportFormat { json, csv };
ReportFormat parse_report_format(std::string_view text);

std::string render_report(const BenchReport& report, ReportFormat format);
void write_report(const BenchReport& report, const std::filesystem::path& path, ReportFormat format);

BenchReport report_from_json(std::string_view text);
// CSV carries measurements only: environment, warnings, node/edge counts,
// effective scales, errors, max_keywords and suites without queries are lost.
BenchReport report_from_csv(std::string_view text);
// Detects JSON or CSV from the content.
BenchReport load_report(const std::filesystem::path& path);

struct BuildRatio {
  std::uint64_t from_scale = 0;
  std::uint64_t to_scale = 0;
  std::optional<double> ratio;      // none when the earlier time is zero
  std::optional<double> deviation;  // |ratio - 2|
};

struct SuiteRatio {
  std::uint64_t scale = 0;
  std::string suite;
  std::optional<double> ratio;  // suite total / single total
};

struct Straggler {
  std::uint64_t scale = 0;
  std::string suite;
  std::size_t query_index = 0;
  std::int64_t duration_ns = 0;
  std::int64_t suite_median_ns = 0;
};

inline constexpr double kStragglerFactor = 10.0;

struct TrendSummary {
  std::vector<BuildRatio> graph_build;
  std::vector<BuildRatio> index_build;
  std::vector<SuiteRatio> multi_vs_single;
  std::vector<Straggler> stragglers;
};

// Needs at least three successful scales. The single-keyword suite at each
// scale is the first one whose max_keywords is 1 (or, when unknown, whose
// name starts with "single").
TrendSummary trend_check(const BenchReport& report);
std::string render_trend_text(const TrendSummary& summary);
std::string render_trend_json(const TrendSummary& summary);

}  // namespace lakebench
