#include <cctype>
#include <fstream>
#include <unordered_map>

#include "common.hpp"
#include "lakebench/error.hpp"
#include "lakebench/keyword.hpp"

namespace lakebench {
namespace {

namespace fs = std::filesystem;

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Finds H:MM or HH:MM inside s, where the hour is not preceded by another
// digit. "2000:13:55:36" yields 13:55, not 00:13.
std::optional<std::string> find_hhmm(std::string_view s) {
  for (std::size_t colon = s.find(':'); colon != std::string_view::npos;
       colon = s.find(':', colon + 1)) {
    if (colon == 0 || !digit(s[colon - 1])) continue;
    if (colon + 2 >= s.size() || !digit(s[colon + 1]) || !digit(s[colon + 2])) continue;
    if (colon + 3 < s.size() && digit(s[colon + 3])) continue;
    std::size_t h = colon - 1;
    if (h > 0 && digit(s[h - 1])) --h;
    if (h > 0 && digit(s[h - 1])) continue;
    const int hour = std::stoi(std::string(s.substr(h, colon - h)));
    const int minute = (s[colon + 1] - '0') * 10 + (s[colon + 2] - '0');
    if (hour > 23 || minute > 59) continue;
    std::string bucket(4, '0');
    bucket[0] = static_cast<char>('0' + hour / 10);
    bucket[1] = static_cast<char>('0' + hour % 10);
    bucket[2] = s[colon + 1];
    bucket[3] = s[colon + 2];
    return bucket;
  }
  return std::nullopt;
}

struct LogLine {
  std::string bucket;
  std::string message;
};

// Error-log lines carry the client address in a bracket after the timestamp
// (and level); access-log lines put it before the timestamp.
std::string strip_client(std::string_view rest) {
  std::size_t pos = 0;
  for (;;) {
    const auto open = rest.find_first_not_of(" \t", pos);
    if (open == std::string_view::npos || rest[open] != '[') break;
    const auto close = rest.find(']', open);
    if (close == std::string_view::npos) break;
    if (rest.substr(open + 1).starts_with("client ")) {
      return std::string(rest.substr(0, open)).append(rest.substr(close + 1));
    }
    pos = close + 1;
  }
  return std::string(rest);
}

std::optional<LogLine> parse_line(std::string_view line) {
  std::size_t open = line.find('[');
  while (open != std::string_view::npos) {
    const std::size_t close = line.find(']', open + 1);
    if (close == std::string_view::npos) return std::nullopt;
    if (auto bucket = find_hhmm(line.substr(open + 1, close - open - 1))) {
      return LogLine{std::move(*bucket), strip_client(line.substr(close + 1))};
    }
    open = line.find('[', close + 1);
  }
  return std::nullopt;
}

}  // namespace

IngestReport ingest_apache_log(const fs::path& log_file, const fs::path& out_dir) {
  std::ifstream in(log_file, std::ios::binary);
  if (!in) throw IoError(log_file, "cannot open for reading");

  IngestReport report;
  GraphBuilder builder;
  struct Pending {
    std::vector<std::string> keywords;
    std::string bucket;
  };
  std::vector<Pending> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++report.records_read;
    auto parsed = parse_line(line);
    if (!parsed) {
      detail::skip(report, "line " + std::to_string(line_no), "no parseable timestamp");
      continue;
    }
    lines.push_back({tokenize(parsed->message), std::move(parsed->bucket)});
    ++report.records_accepted;
  }
  if (in.bad()) throw IoError(log_file, "read failed");

  for (std::size_t i = 0; i < lines.size(); ++i) builder.add_node(i, lines[i].keywords);
  std::unordered_map<std::string, NodeId> buckets;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto it = buckets.find(lines[i].bucket);
    if (it == buckets.end()) {
      const std::string kw = lines[i].bucket;
      it = buckets.emplace(kw, builder.add_node(lines.size() + buckets.size(), {kw})).first;
    }
    builder.add_edge(it->second, node_id(i));
  }

  detail::write_outputs(std::move(builder), out_dir, report);
  return report;
}

}  // namespace lakebench
