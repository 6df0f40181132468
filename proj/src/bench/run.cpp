#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <random>
#include <thread>

#include "lakebench/bench.hpp"
#include "lakebench/error.hpp"

#ifndef LAKEBENCH_VERSION
#define LAKEBENCH_VERSION "unknown"
#endif

namespace lakebench {
namespace {

namespace fs = std::filesystem;

// Keeps the timed searches observable.
volatile std::size_t search_sink = 0;

struct PreparedData {
  fs::path nodes;
  fs::path edges;
  std::uint64_t effective_scale = 0;
  std::optional<std::string> clamp_warning;
};

class ScratchDir {
 public:
  explicit ScratchDir(fs::path requested) {
    if (!requested.empty()) {
      path_ = std::move(requested);
      return;
    }
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("lakebench_bench_" + std::to_string(rd()));
    owned_ = true;
  }
  ~ScratchDir() {
    if (owned_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  bool owned_ = false;
};

PreparedData prepare(const DataSource& source, std::uint64_t scale, const fs::path& dir) {
  PreparedData data{dir / kNodesFile, dir / kEdgesFile, scale, std::nullopt};
  const auto clamped = [&](std::uint64_t available, std::string_view unit) {
    data.effective_scale = available;
    data.clamp_warning = "scale " + std::to_string(scale) + " exceeds the dataset (" +
                         std::to_string(available) + " " + std::string(unit) +
                         "); clamped to " + std::to_string(available);
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GraphFileSource>) {
          const auto report = subsample(s.nodes, s.edges, ScaleSpec{scale}, dir);
          if (report.nodes_written < scale) clamped(report.nodes_written, "nodes");
        } else if constexpr (std::is_same_v<T, SyntheticSource>) {
          auto cfg = s.base;
          cfg.node_count = scale;
          generate_synthetic(cfg, dir);
        } else {
          const auto report = ingest_dblp(s.xml, dir, ScaleSpec{scale});
          if (report.records_read < scale) clamped(report.records_read, "records");
        }
      },
      source);
  return data;
}

// Runs `work` warmup times untimed, then `reps` times timed; returns the
// median duration.
template <typename Work>
std::int64_t timed_median(const Clock& clock, std::size_t warmup, std::size_t reps, Work&& work) {
  for (std::size_t i = 0; i < warmup; ++i) work();
  std::vector<std::int64_t> samples;
  samples.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    const auto start = clock();
    work();
    samples.push_back(clock() - start);
  }
  return median_ns(std::move(samples));
}

void run_scale(const BenchPlan& plan, const PreparedData& data, const Clock& clock,
               ScaleEntry& entry) {
  std::optional<DataGraph> graph;
  entry.graph_build_ns = timed_median(clock, plan.warmup_runs, plan.repetitions, [&] {
    graph.reset();
    graph.emplace(load_graph(data.nodes, data.edges));
  });
  entry.node_count = graph->node_count();
  entry.edge_count = graph->edge_count();

  std::optional<KeywordIndex> index;
  entry.index_build_ns = timed_median(clock, plan.warmup_runs, plan.repetitions, [&] {
    index.reset();
    index.emplace(build_index(*graph, plan.index_config));
  });
  entry.index_size_bytes = index->size_bytes();
  graph.reset();

  std::size_t sink = 0;
  for (const auto& suite : plan.suites) {
    SuiteTiming timing;
    timing.name = suite.name;
    timing.max_keywords = suite.max_keywords();
    for (std::size_t pass = 0; pass < plan.warmup_runs; ++pass) {
      for (const auto& q : suite.queries) sink += search(*index, q, plan.index_config).visited;
    }
    std::vector<std::vector<std::int64_t>> samples(suite.queries.size());
    for (std::size_t pass = 0; pass < plan.repetitions; ++pass) {
      for (std::size_t i = 0; i < suite.queries.size(); ++i) {
        const auto start = clock();
        const auto result = search(*index, suite.queries[i], plan.index_config);
        samples[i].push_back(clock() - start);
        sink += result.visited;
      }
    }
    for (auto& s : samples) {
      timing.per_query_ns.push_back(median_ns(std::move(s)));
      timing.total_ns += timing.per_query_ns.back();
    }
    entry.suites.push_back(std::move(timing));
  }
  search_sink = sink;
}

}  // namespace

Clock steady_clock_ns() {
  return [] {
    return static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                         std::chrono::steady_clock::now().time_since_epoch())
                                         .count());
  };
}

std::int64_t median_ns(std::vector<std::int64_t> samples) {
  if (samples.empty()) return 0;
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  if (n % 2 == 1) return samples[n / 2];
  return samples[n / 2 - 1] + (samples[n / 2] - samples[n / 2 - 1]) / 2;
}

bool BenchReport::any_failed() const {
  return std::any_of(scales.begin(), scales.end(), [](const auto& s) { return !s.error.empty(); });
}

Environment current_environment() {
  Environment env;
  utsname u{};
  if (uname(&u) == 0) {
    env.host = std::string(u.sysname) + " " + u.release + " " + u.machine;
  } else {
    env.host = "unknown";
  }
  env.host += ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  env.timestamp = buf;
  env.tool_version = LAKEBENCH_VERSION;
  return env;
}

void BenchPlan::validate() const {
  if (scales.empty()) throw InvalidInput("bench plan needs at least one scale");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] == 0) throw InvalidInput("scales must be positive");
    if (i > 0 && scales[i] <= scales[i - 1]) {
      throw InvalidInput("scales must be strictly ascending");
    }
  }
  if (repetitions == 0) throw InvalidInput("repetitions must be at least 1");
  index_config.validate();
  for (const auto& s : suites) {
    if (s.name.empty() || s.name.front() == '@' ||
        s.name.find_first_of(",\"\r\n") != std::string::npos) {
      throw InvalidInput("invalid suite name '" + s.name +
                         "' (must be non-empty, not start with '@', and contain no commas, "
                         "quotes or line breaks)");
    }
    for (const auto& q : s.queries) {
      if (q.empty()) throw InvalidInput("suite '" + s.name + "' contains an empty query");
    }
  }
  for (std::size_t i = 0; i < suites.size(); ++i) {
    for (std::size_t j = i + 1; j < suites.size(); ++j) {
      if (suites[i].name == suites[j].name) {
        throw InvalidInput("duplicate suite name '" + suites[i].name + "'");
      }
    }
  }
}

BenchReport run_bench(const BenchPlan& plan, const DataSource& source,
                      const BenchOptions& options) {
  plan.validate();
  BenchReport report;
  report.environment = current_environment();
  const Clock clock = options.clock ? options.clock : steady_clock_ns();
  ScratchDir scratch(options.work_dir);

  for (auto scale : plan.scales) {
    ScaleEntry entry;
    entry.scale = scale;
    entry.effective_scale = scale;
    try {
      const auto data = prepare(source, scale, scratch.path() / ("scale_" + std::to_string(scale)));
      entry.effective_scale = data.effective_scale;
      if (data.clamp_warning) report.warnings.push_back(*data.clamp_warning);
      run_scale(plan, data, clock, entry);
    } catch (const std::exception& e) {
      entry.error = e.what();
      entry.suites.clear();
    }
    report.scales.push_back(std::move(entry));
  }
  return report;
}

}  // namespace lakebench
