#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lakebench {

// Reads a whole file into memory; throws IoError.
std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never observe a
// partially written file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace lakebench
