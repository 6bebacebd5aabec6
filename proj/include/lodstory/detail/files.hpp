#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lodstory::detail {

// Errors: IoError.
std::string read_file(const std::filesystem::path& path);

// Writes a sibling temp file, then renames it over `path`. Creates missing
// parent directories. Errors: IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace lodstory::detail
