#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mids::text {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);
// Splits on runs of blanks (space or tab); empty fields are dropped.
std::vector<std::string_view> split_ws(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

std::int64_t parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

// Round-trip-exact decimal rendering of a double (shortest form).
std::string format_double(double v);
// Fixed-point rendering, e.g. format_fixed(0.98254, 2) == "0.98".
std::string format_fixed(double v, int decimals);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// FNV-1a 64-bit; used for content hashes in manifests.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

// `key = value` lines; '#' starts a comment. Later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(std::string_view contents);

}  // namespace mids::text
