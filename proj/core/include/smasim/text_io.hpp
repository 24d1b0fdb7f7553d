#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace smasim {

/// Format a double with 17 significant digits (round-trips bit-exactly).
std::string g17(double v);

/// Shorter human-facing format (tables, SVG labels).
std::string g10(double v);

/// strtod wrapper that rejects trailing junk.
double parse_double(std::string_view text);

/// Split one CSV record on commas. No quoting: none of the emitted schemas
/// needs it.
std::vector<std::string> split_csv(std::string_view line);

/// FNV-1a 64-bit over a byte string, as fixed-width hex.
std::string fnv1a_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Parallelism cap: SMA_SIM_THREADS if set, else hardware concurrency.
unsigned max_sim_threads();

}
