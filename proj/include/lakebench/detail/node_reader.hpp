#pragma once

#include <fstream>
#include <string>

#include "lakebench/error.hpp"

namespace lakebench {

template <typename Visitor>
void for_each_node_record(const std::filesystem::path& nodes_file, Visitor&& visit) {
  std::ifstream in(nodes_file, std::ios::binary);
  if (!in) throw IoError(nodes_file, "cannot open node file");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto record = parse_node_line(line);
    if (!record) throw ParseError(nodes_file, line_no, "expected '<id>,<keywords>'");
    visit(std::move(*record), line_no);
  }
  if (in.bad()) throw IoError(nodes_file, "read failed");
}

}  // namespace lakebench
