#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace epishape {

inline constexpr std::string_view kVersion = "0.1.0";

/// 9 significant digits; infinity becomes the empty string.
std::string format_time(double t);
std::string format_real(double v);

/// "# epishape <version> seed=<seed> config_hash=<hash>\n"
std::string provenance_header(std::uint64_t seed, std::uint64_t config_hash);

/// FNV-1a 64-bit
std::uint64_t fnv1a(std::string_view text);

/// Writes to a temporary file in the same directory, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace epishape
