#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vrrw {

// Writes to a sibling temporary file and renames it over the target, so a
// reader never sees a torn file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// "7", "1..1000", "1,4,9" or mixtures such as "1..5,10".
std::vector<uint64_t> parse_seed_list(const std::string& text);

// "lo:hi:n" -> n equally spaced values from lo to hi inclusive (n >= 2).
std::vector<double> parse_sweep(const std::string& text);

// "lo:hi" integer window.
std::pair<int64_t, int64_t> parse_window(const std::string& text);

// Weight names such as "polylog:0.6" made safe for file names.
std::string file_tag(const std::string& text);

} // namespace vrrw
