#include <fstream>

#include "json.hpp"
#include "lakebench/error.hpp"
#include "lakebench/io.hpp"
#include "lakebench/workload.hpp"

namespace lakebench {

namespace fs = std::filesystem;

fs::path sidecar_path(const fs::path& suite_file) {
  return suite_file.parent_path() / (suite_file.stem().string() + ".meta.json");
}

void write_suite(const QuerySuite& suite, const fs::path& path) {
  std::string text;
  for (const auto& q : suite.queries) {
    if (q.empty()) throw InvalidInput("suite '" + suite.name + "' contains an empty query");
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (i > 0) text.push_back(' ');
      text += q[i];
    }
    text.push_back('\n');
  }

  const auto& p = suite.provenance;
  nlohmann::ordered_json meta;
  meta["name"] = suite.name;
  meta["policy"] = to_string(p.policy);
  meta["seed"] = p.seed;
  meta["cutoff_fraction"] = p.cutoff_fraction;
  meta["k"] = p.k;
  meta["radius"] = p.radius ? nlohmann::ordered_json(*p.radius) : nlohmann::ordered_json();
  if (p.policy == Policy::related) {
    meta["restarts"] = p.restarts;
    meta["short_queries"] = p.short_queries;
  }

  write_file_atomic(path, text);
  write_file_atomic(sidecar_path(path), meta.dump(2) + "\n");
}

QuerySuite read_suite(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open query file");
  QuerySuite suite;
  suite.name = path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Query q;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string::npos) break;
      const auto end = line.find_first_of(" \t", start);
      q.push_back(line.substr(start, end - start));
      pos = end == std::string::npos ? line.size() : end;
    }
    if (q.empty()) throw ParseError(path, line_no, "blank line (empty queries are invalid)");
    suite.queries.push_back(std::move(q));
  }
  if (in.bad()) throw IoError(path, "read failed");

  const auto meta_file = sidecar_path(path);
  if (!fs::exists(meta_file)) {
    suite.provenance.k = suite.max_keywords();
    return suite;
  }
  try {
    const auto meta = nlohmann::json::parse(read_file(meta_file));
    auto& p = suite.provenance;
    suite.name = meta.at("name").get<std::string>();
    p.policy = parse_policy(meta.at("policy").get<std::string>());
    p.seed = meta.at("seed").get<std::uint64_t>();
    p.cutoff_fraction = meta.at("cutoff_fraction").get<double>();
    p.k = meta.at("k").get<std::size_t>();
    if (!meta.at("radius").is_null()) p.radius = meta.at("radius").get<int>();
    if (meta.contains("restarts")) {
      p.restarts = meta.at("restarts").get<std::vector<std::vector<std::size_t>>>();
    }
    if (meta.contains("short_queries")) {
      p.short_queries = meta.at("short_queries").get<std::vector<std::size_t>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(meta_file, 1, std::string("invalid suite metadata: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(meta_file, 1, std::string("invalid suite metadata: ") + e.what());
  }
  return suite;
}

}  // namespace lakebench
