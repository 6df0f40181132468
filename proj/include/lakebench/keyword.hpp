#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lakebench {

// Keyword normalization shared by every adapter, the graph loader and the
// query path. A normalized keyword is non-empty, lowercase ASCII (bytes >= 0x80
// pass through untouched), has no leading or trailing ASCII punctuation and no
// whitespace. normalize_keyword is idempotent.
std::string normalize_keyword(std::string_view token);

// Splits on ASCII whitespace and control characters, normalizes each piece and
// drops pieces that normalize to nothing.
std::vector<std::string> tokenize(std::string_view text);

bool is_normalized_keyword(std::string_view keyword);

}  // namespace lakebench
