#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "common.hpp"
#include "csv.hpp"
#include "lakebench/error.hpp"
#include "lakebench/keyword.hpp"

namespace lakebench {
namespace {

namespace fs = std::filesystem;

struct Movie {
  std::uint64_t source_id;
  std::vector<std::string> keywords;     // genres, year, then tags
  std::vector<std::string> title_words;  // year suffix removed
};

struct User {
  std::vector<std::size_t> movies;  // distinct, in order of first relation
};

struct Table {
  fs::path path;
  std::ifstream in;
  detail::CsvReader reader{in};

  explicit Table(fs::path p) : path(std::move(p)), in(path, std::ios::binary) {
    if (!in) throw IoError(path, "cannot open for reading");
  }

  std::string locator() const { return path.filename().string() + ":" + std::to_string(reader.line()); }
};

bool equals_ignore_case(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_blank(const std::vector<std::string>& row) {
  return std::all_of(row.begin(), row.end(), [](const std::string& f) {
    return std::all_of(f.begin(), f.end(), [](unsigned char c) { return std::isspace(c); });
  });
}

// Consumes the header row. Returns false for an input with no rows at all.
bool read_header(Table& t, std::initializer_list<std::string_view> expected) {
  std::vector<std::string> row;
  do {
    if (!t.reader.next(row)) return false;
  } while (is_blank(row));

  if (!row.empty() && row[0].starts_with("\xEF\xBB\xBF")) row[0].erase(0, 3);
  bool ok = row.size() == expected.size();
  for (std::size_t i = 0; ok && i < row.size(); ++i) {
    ok = equals_ignore_case(row[i], *(expected.begin() + static_cast<std::ptrdiff_t>(i)));
  }
  if (!ok) {
    std::string want;
    for (auto name : expected) want += (want.empty() ? "" : ",") + std::string(name);
    throw ParseError(t.path, t.reader.line(), "missing header (expected '" + want + "')");
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits "Title (1995)" into the title text and the year, if present.
std::pair<std::string_view, std::optional<std::string>> split_year(std::string_view title) {
  title = trim(title);
  if (title.size() >= 6 && title.back() == ')' && title[title.size() - 6] == '(') {
    const auto digits = title.substr(title.size() - 5, 4);
    if (std::all_of(digits.begin(), digits.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      return {title.substr(0, title.size() - 6), std::string(digits)};
    }
  }
  return {title, std::nullopt};
}

Movie parse_movie(std::uint64_t id, std::string_view title, std::string_view genres) {
  Movie m{id, {}, {}};
  while (!genres.empty()) {
    const auto bar = genres.find('|');
    const auto genre = trim(genres.substr(0, bar));
    if (!equals_ignore_case(genre, "(no genres listed)")) {
      for (auto& kw : tokenize(genre)) m.keywords.push_back(std::move(kw));
    }
    if (bar == std::string_view::npos) break;
    genres.remove_prefix(bar + 1);
  }
  auto [text, year] = split_year(title);
  if (year) m.keywords.push_back(*year);
  m.title_words = tokenize(text);
  return m;
}

}  // namespace

IngestReport ingest_movies(const fs::path& movies_csv, const fs::path& ratings_csv,
                           const fs::path& tags_csv, const fs::path& out_dir) {
  IngestReport report;
  std::vector<Movie> movies;
  std::unordered_map<std::uint64_t, std::size_t> movie_index;
  std::vector<std::string> row;

  {
    Table t(movies_csv);
    if (read_header(t, {"movieId", "title", "genres"})) {
      while (t.reader.next(row)) {
        if (is_blank(row)) continue;
        ++report.records_read;
        if (t.reader.malformed()) {
          detail::skip(report, t.locator(), "unterminated quoted field");
          continue;
        }
        if (row.size() != 3) {
          detail::skip(report, t.locator(), "expected 3 fields, found " + std::to_string(row.size()));
          continue;
        }
        const auto id = detail::parse_unsigned<std::uint64_t>(trim(row[0]));
        if (!id) {
          detail::skip(report, t.locator(), "invalid movieId '" + row[0] + "'");
          continue;
        }
        if (!movie_index.emplace(*id, movies.size()).second) {
          detail::skip(report, t.locator(), "duplicate movieId " + row[0]);
          continue;
        }
        movies.push_back(parse_movie(*id, row[1], row[2]));
        ++report.records_accepted;
      }
    }
  }

  std::vector<User> users;
  std::unordered_map<std::uint64_t, std::size_t> user_index;

  // Ratings and tags share their first two columns; tags also feed keywords.
  const auto read_relations = [&](const fs::path& path, std::string_view third, bool is_tags) {
    Table t(path);
    if (!read_header(t, {"userId", "movieId", third, "timestamp"})) return;
    while (t.reader.next(row)) {
      if (is_blank(row)) continue;
      ++report.records_read;
      if (t.reader.malformed()) {
        detail::skip(report, t.locator(), "unterminated quoted field");
        continue;
      }
      if (row.size() != 4) {
        detail::skip(report, t.locator(), "expected 4 fields, found " + std::to_string(row.size()));
        continue;
      }
      const auto uid = detail::parse_unsigned<std::uint64_t>(trim(row[0]));
      const auto mid = detail::parse_unsigned<std::uint64_t>(trim(row[1]));
      if (!uid) {
        detail::skip(report, t.locator(), "invalid userId '" + row[0] + "'");
        continue;
      }
      if (!mid) {
        detail::skip(report, t.locator(), "invalid movieId '" + row[1] + "'");
        continue;
      }
      const auto m = movie_index.find(*mid);
      if (m == movie_index.end()) {
        detail::skip(report, t.locator(), "unknown movieId " + std::to_string(*mid));
        continue;
      }
      auto [u, inserted] = user_index.emplace(*uid, users.size());
      if (inserted) users.emplace_back();
      auto& related = users[u->second].movies;
      if (std::find(related.begin(), related.end(), m->second) == related.end()) {
        related.push_back(m->second);
      }
      if (is_tags) {
        for (auto& kw : tokenize(row[2])) movies[m->second].keywords.push_back(std::move(kw));
      }
      ++report.records_accepted;
    }
  };
  read_relations(ratings_csv, "rating", false);
  read_relations(tags_csv, "tag", true);

  // Source ids of movies and users may collide, so nodes get dense ids:
  // movies 0..M-1, users M..M+U-1.
  GraphBuilder builder;
  for (std::size_t i = 0; i < movies.size(); ++i) builder.add_node(i, movies[i].keywords);
  std::vector<std::string> words;
  for (std::size_t u = 0; u < users.size(); ++u) {
    words.clear();
    for (auto m : users[u].movies) {
      words.insert(words.end(), movies[m].title_words.begin(), movies[m].title_words.end());
    }
    const NodeId user = builder.add_node(movies.size() + u, words);
    for (auto m : users[u].movies) builder.add_edge(user, node_id(m));
  }

  detail::write_outputs(std::move(builder), out_dir, report);
  return report;
}

}  // namespace lakebench
