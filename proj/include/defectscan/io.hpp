#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace defectscan {

/// Reads a whole file; throws Error("file not found: ...") if it is missing.
std::string read_file(const std::filesystem::path& path);

/// Writes bytes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace defectscan
