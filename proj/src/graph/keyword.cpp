#include "lakebench/keyword.hpp"

namespace lakebench {
namespace {

bool is_space(unsigned char c) { return c <= 0x20 || c == 0x7f; }

bool is_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x7b && c <= 0x7e);
}

bool is_trimmable(unsigned char c) { return is_space(c) || is_punct(c); }

}  // namespace

std::string normalize_keyword(std::string_view token) {
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end && is_trimmable(static_cast<unsigned char>(token[begin]))) ++begin;
  while (end > begin && is_trimmable(static_cast<unsigned char>(token[end - 1]))) --end;

  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    auto c = static_cast<unsigned char>(token[i]);
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) {
      auto kw = normalize_keyword(text.substr(start, i - start));
      if (!kw.empty()) out.push_back(std::move(kw));
    }
  }
  return out;
}

bool is_normalized_keyword(std::string_view keyword) {
  if (keyword.empty()) return false;
  for (char ch : keyword) {
    auto c = static_cast<unsigned char>(ch);
    if (is_space(c) || (c >= 'A' && c <= 'Z')) return false;
  }
  return !is_punct(static_cast<unsigned char>(keyword.front())) &&
         !is_punct(static_cast<unsigned char>(keyword.back()));
}

}  // namespace lakebench
