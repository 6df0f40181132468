#pragma once

#include <istream>
#include <string>
#include <vector>

namespace lakebench::detail {

// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
// span lines. Tolerates CRLF.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next record; false at end of input.
  bool next(std::vector<std::string>& fields);

  // 1-based line on which the last record started.
  std::size_t line() const noexcept { return record_line_; }

  // True if the last record had an unterminated quote.
  bool malformed() const noexcept { return malformed_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool malformed_ = false;
};

}  // namespace lakebench::detail
