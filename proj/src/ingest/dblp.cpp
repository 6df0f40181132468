#include <expat.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <memory>
#include <unordered_map>

#include "common.hpp"
#include "lakebench/error.hpp"
#include "lakebench/keyword.hpp"

namespace lakebench {
namespace {

namespace fs = std::filesystem;

constexpr std::array<std::string_view, 7> kRecordElements = {
    "article", "inproceedings", "proceedings", "book", "incollection", "phdthesis", "mastersthesis"};

// HTML Latin-1 entity names for code points 160..255, as declared by the
// bibliography DTD. Documents reference them without the DTD being loaded.
constexpr std::array<std::string_view, 96> kLatin1Entities = {
    "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar", "sect",
    "uml",    "copy",   "ordf",   "laquo",  "not",    "shy",    "reg",    "macr",
    "deg",    "plusmn", "sup2",   "sup3",   "acute",  "micro",  "para",   "middot",
    "cedil",  "sup1",   "ordm",   "raquo",  "frac14", "frac12", "frac34", "iquest",
    "Agrave", "Aacute", "Acirc",  "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil",
    "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",
    "ETH",    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",
    "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",  "szlig",
    "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",  "aelig",  "ccedil",
    "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",
    "eth",    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "divide",
    "oslash", "ugrave", "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};

void append_latin1_utf8(std::string& out, unsigned code) {
  out.push_back(static_cast<char>(0xC0 | (code >> 6)));
  out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
}

enum class Field { none, title, author, year };

struct Parser {
  fs::path file;
  XML_Parser xml = nullptr;
  std::optional<std::uint64_t> limit;

  IngestReport report;
  GraphBuilder builder;
  std::unordered_map<std::string, NodeId> authors;
  std::size_t next_external = 0;

  int depth = 0;
  bool in_record = false;
  std::uint64_t record_offset = 0;
  Field field = Field::none;
  int field_depth = 0;
  std::string text;
  std::optional<std::string> title;
  std::optional<std::string> year;
  std::vector<std::string> record_authors;
  bool stopped = false;

  void start(const XML_Char* name) {
    ++depth;
    if (depth == 2) {
      in_record = std::find(kRecordElements.begin(), kRecordElements.end(), name) !=
                  kRecordElements.end();
      if (in_record) {
        record_offset = static_cast<std::uint64_t>(XML_GetCurrentByteIndex(xml));
        title.reset();
        year.reset();
        record_authors.clear();
      }
      return;
    }
    if (!in_record || field != Field::none || depth != 3) return;
    if (std::strcmp(name, "title") == 0) {
      field = Field::title;
    } else if (std::strcmp(name, "author") == 0) {
      field = Field::author;
    } else if (std::strcmp(name, "year") == 0) {
      field = Field::year;
    } else {
      return;
    }
    field_depth = depth;
    text.clear();
  }

  void end() {
    if (field != Field::none && depth == field_depth) {
      switch (field) {
        case Field::title: title = text; break;
        case Field::author: record_authors.push_back(text); break;
        case Field::year: year = text; break;
        case Field::none: break;
      }
      field = Field::none;
    }
    if (depth == 2 && in_record) {
      finish_record();
      in_record = false;
      if (limit && report.records_read >= *limit) {
        stopped = true;
        XML_StopParser(xml, XML_FALSE);
      }
    }
    --depth;
  }

  void characters(const XML_Char* s, int len) {
    if (field != Field::none) text.append(s, static_cast<std::size_t>(len));
  }

  void skipped_entity(const XML_Char* name) {
    if (field == Field::none) return;
    const auto it = std::find(kLatin1Entities.begin(), kLatin1Entities.end(), name);
    if (it != kLatin1Entities.end()) {
      append_latin1_utf8(text, 160 + static_cast<unsigned>(it - kLatin1Entities.begin()));
    }
  }

  void finish_record() {
    ++report.records_read;
    const std::string locator = "record " + std::to_string(report.records_read) + " (byte " +
                                std::to_string(record_offset) + ")";
    std::vector<std::string> keywords = title ? tokenize(*title) : std::vector<std::string>{};
    if (keywords.empty()) {
      detail::skip(report, locator, title ? "empty title" : "missing title");
      return;
    }
    if (year) {
      for (auto& kw : tokenize(*year)) keywords.push_back(std::move(kw));
    }
    const NodeId paper = builder.add_node(next_external++, keywords);

    for (const auto& raw : record_authors) {
      auto tokens = tokenize(raw);
      if (tokens.empty()) continue;
      std::string key;
      for (const auto& t : tokens) key += (key.empty() ? "" : " ") + t;
      auto it = authors.find(key);
      if (it == authors.end()) {
        it = authors.emplace(std::move(key), builder.add_node(next_external++, tokens)).first;
      }
      builder.add_edge(it->second, paper);
    }
    ++report.records_accepted;
  }
};

extern "C" {
void on_start(void* data, const XML_Char* name, const XML_Char**) {
  static_cast<Parser*>(data)->start(name);
}
void on_end(void* data, const XML_Char*) { static_cast<Parser*>(data)->end(); }
void on_characters(void* data, const XML_Char* s, int len) {
  static_cast<Parser*>(data)->characters(s, len);
}
void on_skipped_entity(void* data, const XML_Char* name, int is_parameter) {
  if (!is_parameter) static_cast<Parser*>(data)->skipped_entity(name);
}
}

struct XmlParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

IngestReport ingest_dblp(const fs::path& xml_file, const fs::path& out_dir,
                         std::optional<ScaleSpec> scale) {
  if (scale && scale->record_count == 0) throw InvalidInput("scale must be at least 1");

  std::ifstream in(xml_file, std::ios::binary);
  if (!in) throw IoError(xml_file, "cannot open for reading");

  std::unique_ptr<std::remove_pointer_t<XML_Parser>, XmlParserDeleter> xml(
      XML_ParserCreate(nullptr));
  if (!xml) throw Error("cannot allocate XML parser");

  Parser p;
  p.file = xml_file;
  p.xml = xml.get();
  if (scale) p.limit = scale->record_count;
  XML_SetUserData(p.xml, &p);
  XML_SetElementHandler(p.xml, on_start, on_end);
  XML_SetCharacterDataHandler(p.xml, on_characters);
  XML_SetSkippedEntityHandler(p.xml, on_skipped_entity);

  std::vector<char> buffer(1 << 20);
  for (;;) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<int>(in.gcount());
    if (in.bad()) throw IoError(xml_file, "read failed");
    const bool last = got == 0 || in.eof();
    if (XML_Parse(p.xml, buffer.data(), got, last) == XML_STATUS_ERROR) {
      if (p.stopped) break;
      const auto code = XML_GetErrorCode(p.xml);
      throw ParseError::at_offset(
          xml_file, static_cast<std::uint64_t>(XML_GetCurrentByteIndex(p.xml)),
          std::string(XML_ErrorString(code)) + " (line " +
              std::to_string(XML_GetCurrentLineNumber(p.xml)) + ", column " +
              std::to_string(XML_GetCurrentColumnNumber(p.xml)) + ")");
    }
    if (last) break;
  }

  if (scale && p.report.records_read < scale->record_count) {
    p.report.notes.push_back("requested " + std::to_string(scale->record_count) +
                             " records, only " + std::to_string(p.report.records_read) +
                             " available");
  }
  detail::write_outputs(std::move(p.builder), out_dir, p.report);
  return std::move(p.report);
}

}  // namespace lakebench
