#include <charconv>
#include <map>
#include <sstream>

#include "json.hpp"
#include "lakebench/bench.hpp"
#include "lakebench/error.hpp"
#include "lakebench/io.hpp"

namespace lakebench {
namespace {

using nlohmann::ordered_json;

constexpr std::string_view kCsvHeader = "scale,suite,query_index,duration_ns";
constexpr std::string_view kGraphRow = "@graph_build";
constexpr std::string_view kIndexRow = "@index_build";

ordered_json to_json(const BenchReport& r) {
  ordered_json j;
  j["environment"] = {{"host", r.environment.host},
                      {"timestamp", r.environment.timestamp},
                      {"tool_version", r.environment.tool_version}};
  j["warnings"] = r.warnings;
  auto scales = ordered_json::array();
  for (const auto& s : r.scales) {
    ordered_json e;
    e["scale"] = s.scale;
    e["effective_scale"] = s.effective_scale;
    e["node_count"] = s.node_count;
    e["edge_count"] = s.edge_count;
    e["graph_build_ns"] = s.graph_build_ns;
    e["index_build_ns"] = s.index_build_ns;
    e["index_size_bytes"] = s.index_size_bytes;
    e["error"] = s.error.empty() ? ordered_json() : ordered_json(s.error);
    auto suites = ordered_json::array();
    for (const auto& t : s.suites) {
      suites.push_back({{"name", t.name},
                        {"max_keywords", t.max_keywords},
                        {"total_ns", t.total_ns},
                        {"per_query_ns", t.per_query_ns}});
    }
    e["suites"] = std::move(suites);
    scales.push_back(std::move(e));
  }
  j["scales"] = std::move(scales);
  return j;
}

std::string render_csv(const BenchReport& r) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  const auto row = [&](std::uint64_t scale, std::string_view suite, const std::string& idx,
                       std::int64_t ns) {
    out += std::to_string(scale);
    out.push_back(',');
    out += suite;
    out.push_back(',');
    out += idx;
    out.push_back(',');
    out += std::to_string(ns);
    out.push_back('\n');
  };
  for (const auto& s : r.scales) {
    if (!s.error.empty()) continue;
    row(s.scale, kGraphRow, "", s.graph_build_ns);
    // The index row carries the index size in the otherwise unused column.
    row(s.scale, kIndexRow, std::to_string(s.index_size_bytes), s.index_build_ns);
    for (const auto& t : s.suites) {
      for (std::size_t i = 0; i < t.per_query_ns.size(); ++i) {
        row(s.scale, t.name, std::to_string(i), t.per_query_ns[i]);
      }
    }
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, const std::filesystem::path& source, std::size_t line_no,
               std::string_view what) {
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
    throw ParseError(source, line_no,
                     "invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

BenchReport parse_json(std::string_view text, const std::filesystem::path& source) {
  BenchReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& env = j.at("environment");
    r.environment = {env.at("host").get<std::string>(), env.at("timestamp").get<std::string>(),
                     env.at("tool_version").get<std::string>()};
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& e : j.at("scales")) {
      ScaleEntry s;
      s.scale = e.at("scale").get<std::uint64_t>();
      s.effective_scale = e.at("effective_scale").get<std::uint64_t>();
      s.node_count = e.at("node_count").get<std::size_t>();
      s.edge_count = e.at("edge_count").get<std::size_t>();
      s.graph_build_ns = e.at("graph_build_ns").get<std::int64_t>();
      s.index_build_ns = e.at("index_build_ns").get<std::int64_t>();
      s.index_size_bytes = e.at("index_size_bytes").get<std::uint64_t>();
      if (!e.at("error").is_null()) s.error = e.at("error").get<std::string>();
      for (const auto& t : e.at("suites")) {
        s.suites.push_back({t.at("name").get<std::string>(), t.at("max_keywords").get<std::size_t>(),
                            t.at("total_ns").get<std::int64_t>(),
                            t.at("per_query_ns").get<std::vector<std::int64_t>>()});
      }
      r.scales.push_back(std::move(s));
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError::at_offset(source, e.byte, "invalid JSON report");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(source.string() + ": invalid report: " + e.what());
  }
  return r;
}

BenchReport parse_csv(std::string_view text, const std::filesystem::path& source) {
  BenchReport r;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::map<std::uint64_t, std::size_t> slot;  // scale -> index in r.scales
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw ParseError(source, 1, "expected header '" + std::string(kCsvHeader) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 4) throw ParseError(source, line_no, "expected 4 fields");

    const auto scale = parse_number<std::uint64_t>(f[0], source, line_no, "scale");
    const auto ns = parse_number<std::int64_t>(f[3], source, line_no, "duration");
    auto [it, fresh] = slot.emplace(scale, r.scales.size());
    if (fresh) {
      if (!r.scales.empty() && r.scales.back().scale > scale) {
        throw ParseError(source, line_no, "scales out of order");
      }
      ScaleEntry e;
      e.scale = scale;
      e.effective_scale = scale;
      r.scales.push_back(std::move(e));
    } else if (it->second + 1 != r.scales.size()) {
      throw ParseError(source, line_no, "rows for a scale must be contiguous");
    }
    auto& entry = r.scales[it->second];

    if (f[1] == kGraphRow) {
      entry.graph_build_ns = ns;
    } else if (f[1] == kIndexRow) {
      entry.index_build_ns = ns;
      entry.index_size_bytes = parse_number<std::uint64_t>(f[2], source, line_no, "index size");
    } else {
      const auto idx = parse_number<std::size_t>(f[2], source, line_no, "query index");
      if (entry.suites.empty() || entry.suites.back().name != f[1]) {
        entry.suites.push_back({std::string(f[1]), 0, 0, {}});
      }
      auto& suite = entry.suites.back();
      if (idx != suite.per_query_ns.size()) {
        throw ParseError(source, line_no, "query indices must run 0, 1, 2, ...");
      }
      suite.per_query_ns.push_back(ns);
      suite.total_ns += ns;
    }
  }
  if (line_no == 0) throw ParseError(source, 1, "empty report");
  return r;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw InvalidInput("unknown report format '" + std::string(text) + "' (expected json or csv)");
}

std::string render_report(const BenchReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) return render_csv(report);
  return to_json(report).dump(2) + "\n";
}

void write_report(const BenchReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  write_file_atomic(path, render_report(report, format));
}

BenchReport report_from_json(std::string_view text) { return parse_json(text, "<json report>"); }

BenchReport report_from_csv(std::string_view text) { return parse_csv(text, "<csv report>"); }

BenchReport load_report(const std::filesystem::path& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text, path);
  return parse_csv(text, path);
}

}  // namespace lakebench
