#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace idealize {

/// Seconds since the Unix epoch, UTC.
using UnixSeconds = std::int64_t;

/// Parses `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM:SS[Z]`. Throws Error(InvalidArgument).
UnixSeconds parse_iso8601(std::string_view text);
/// Always `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(UnixSeconds t);

/// 64-bit FNV-1a. Stable across platforms; used for fixture and cache file names.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t value);

/// Shortest round-trip decimal form of `value` ("1", "0.25", "1e-07").
std::string format_number(double value);

std::string read_file(const std::filesystem::path& path);
/// Writes through a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Directory holding the bundled stoplist, lexicon, capitals and fixtures.
/// `IDEALIZE_DATA_DIR` in the environment wins over the build-time default.
std::filesystem::path default_data_dir();

}  // namespace idealize
