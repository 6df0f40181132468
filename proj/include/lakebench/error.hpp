#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace lakebench {

// Base for every error raised by the library. The CLI prints what() verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. Carries the file and either a 1-based line number or a
// byte offset, whichever locates the problem for that format.
class ParseError : public Error {
 public:
  ParseError(std::filesystem::path file, std::size_t line, const std::string& what)
      : Error(file.string() + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  static ParseError at_offset(std::filesystem::path file, std::uint64_t offset,
                              const std::string& what) {
    return ParseError(std::move(file), 0, what, offset);
  }

  const std::filesystem::path& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::uint64_t byte_offset() const noexcept { return offset_; }

 private:
  ParseError(std::filesystem::path file, std::size_t line, const std::string& what,
             std::uint64_t offset)
      : Error(file.string() + ": byte " + std::to_string(offset) + ": " + what),
        file_(std::move(file)),
        line_(line),
        offset_(offset) {}

  std::filesystem::path file_;
  std::size_t line_ = 0;
  std::uint64_t offset_ = 0;
};

// An edge names a node id that was never declared.
class IntegrityError : public Error {
 public:
  IntegrityError(std::uint64_t offending_id, const std::string& what)
      : Error(what), offending_id_(offending_id) {}

  std::uint64_t offending_id() const noexcept { return offending_id_; }

 private:
  std::uint64_t offending_id_;
};

class IoError : public Error {
 public:
  IoError(std::filesystem::path path, const std::string& what)
      : Error(what + ": " + path.string()), path_(std::move(path)) {}

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

// A caller-supplied argument violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace lakebench
