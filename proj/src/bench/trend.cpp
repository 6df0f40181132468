#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "lakebench/bench.hpp"
#include "lakebench/error.hpp"

namespace lakebench {
namespace {

std::optional<double> ratio_of(std::int64_t num, std::int64_t den) {
  if (den <= 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

BuildRatio build_ratio(const ScaleEntry& a, const ScaleEntry& b, std::int64_t ScaleEntry::*field) {
  BuildRatio r{a.scale, b.scale, ratio_of(b.*field, a.*field), std::nullopt};
  if (r.ratio) r.deviation = std::abs(*r.ratio - 2.0);
  return r;
}

const SuiteTiming* single_suite(const ScaleEntry& s) {
  for (const auto& t : s.suites) {
    if (t.max_keywords == 1) return &t;
  }
  for (const auto& t : s.suites) {
    if (t.max_keywords == 0 && t.name.rfind("single", 0) == 0) return &t;
  }
  return nullptr;
}

std::string fmt(std::optional<double> v, const char* pattern = "%.3f") {
  if (!v) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, *v);
  return buf;
}

nlohmann::ordered_json opt_json(std::optional<double> v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace

TrendSummary trend_check(const BenchReport& report) {
  std::vector<const ScaleEntry*> ok;
  for (const auto& s : report.scales) {
    if (s.error.empty()) ok.push_back(&s);
  }
  if (ok.size() < 3) {
    throw InvalidInput("trend check needs at least 3 successful scales, report has " +
                       std::to_string(ok.size()));
  }

  TrendSummary t;
  for (std::size_t i = 1; i < ok.size(); ++i) {
    t.graph_build.push_back(build_ratio(*ok[i - 1], *ok[i], &ScaleEntry::graph_build_ns));
    t.index_build.push_back(build_ratio(*ok[i - 1], *ok[i], &ScaleEntry::index_build_ns));
  }
  for (const auto* s : ok) {
    if (const auto* single = single_suite(*s)) {
      for (const auto& suite : s->suites) {
        if (&suite == single) continue;
        t.multi_vs_single.push_back({s->scale, suite.name, ratio_of(suite.total_ns, single->total_ns)});
      }
    }
    for (const auto& suite : s->suites) {
      const auto median = median_ns(suite.per_query_ns);
      for (std::size_t q = 0; q < suite.per_query_ns.size(); ++q) {
        const auto d = suite.per_query_ns[q];
        if (static_cast<double>(d) > kStragglerFactor * static_cast<double>(median)) {
          t.stragglers.push_back({s->scale, suite.name, q, d, median});
        }
      }
    }
  }
  return t;
}

std::string render_trend_text(const TrendSummary& t) {
  std::string out;
  char line[256];
  const auto ratios = [&](const char* title, const std::vector<BuildRatio>& rows) {
    out += title;
    out += "\n";
    std::snprintf(line, sizeof line, "  %10s %10s %10s %10s\n", "from", "to", "ratio", "|r-2|");
    out += line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "  %10llu %10llu %10s %10s\n",
                    static_cast<unsigned long long>(r.from_scale),
                    static_cast<unsigned long long>(r.to_scale), fmt(r.ratio).c_str(),
                    fmt(r.deviation).c_str());
      out += line;
    }
  };
  ratios("graph build ratios", t.graph_build);
  ratios("index build ratios", t.index_build);

  out += "multi vs single total time\n";
  std::snprintf(line, sizeof line, "  %10s %-16s %10s\n", "scale", "suite", "ratio");
  out += line;
  for (const auto& r : t.multi_vs_single) {
    std::snprintf(line, sizeof line, "  %10llu %-16s %10s\n",
                  static_cast<unsigned long long>(r.scale), r.suite.c_str(), fmt(r.ratio).c_str());
    out += line;
  }

  std::snprintf(line, sizeof line, "stragglers (> %gx suite median)\n", kStragglerFactor);
  out += line;
  if (t.stragglers.empty()) out += "  none\n";
  for (const auto& s : t.stragglers) {
    std::snprintf(line, sizeof line, "  scale %llu suite %s query %zu: %lld ns (median %lld ns)\n",
                  static_cast<unsigned long long>(s.scale), s.suite.c_str(), s.query_index,
                  static_cast<long long>(s.duration_ns), static_cast<long long>(s.suite_median_ns));
    out += line;
  }
  return out;
}

std::string render_trend_json(const TrendSummary& t) {
  using nlohmann::ordered_json;
  const auto ratios = [](const std::vector<BuildRatio>& rows) {
    auto arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"from_scale", r.from_scale},
                     {"to_scale", r.to_scale},
                     {"ratio", opt_json(r.ratio)},
                     {"deviation", opt_json(r.deviation)}});
    }
    return arr;
  };
  ordered_json j;
  j["graph_build"] = ratios(t.graph_build);
  j["index_build"] = ratios(t.index_build);
  auto mvs = ordered_json::array();
  for (const auto& r : t.multi_vs_single) {
    mvs.push_back({{"scale", r.scale}, {"suite", r.suite}, {"ratio", opt_json(r.ratio)}});
  }
  j["multi_vs_single"] = std::move(mvs);
  auto st = ordered_json::array();
  for (const auto& s : t.stragglers) {
    st.push_back({{"scale", s.scale},
                  {"suite", s.suite},
                  {"query_index", s.query_index},
                  {"duration_ns", s.duration_ns},
                  {"suite_median_ns", s.suite_median_ns}});
  }
  j["stragglers"] = std::move(st);
  j["straggler_factor"] = kStragglerFactor;
  return j.dump(2) + "\n";
}

}  // namespace lakebench
