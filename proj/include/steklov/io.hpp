#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace steklov {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over the target.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Round-trip decimal form of a double ("%.17g").
std::string format_double(double value);

}  // namespace steklov
