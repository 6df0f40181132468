#pragma once

#include <charconv>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lakebench/graph.hpp"
#include "lakebench/ingest.hpp"

namespace lakebench::detail {

// Builds the graph, writes nodes/edges/report into out_dir and fills the
// node and edge counts of the report.
void write_outputs(GraphBuilder&& builder, const std::filesystem::path& out_dir,
                   IngestReport& report);

void skip(IngestReport& report, std::string locator, std::string reason);

template <typename T>
std::optional<T> parse_unsigned(std::string_view s) {
  T value{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace lakebench::detail
