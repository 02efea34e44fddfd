#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgdf {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower_ascii(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> split_lines(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and rename, so readers never see a
// half-written file.
void write_file(const std::filesystem::path& path, std::string_view content);

// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

// Number of UTF-16 code units needed for the first `byte_offset` bytes of a
// UTF-8 string. Used to hand span offsets to browser clients.
std::size_t utf16_offset(std::string_view utf8, std::size_t byte_offset) noexcept;

}  // namespace kgdf
