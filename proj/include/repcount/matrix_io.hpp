#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "repcount/types.hpp"

namespace repcount {

// Text format: one frame per line, comma-separated decimals, LF endings, no header.
// Binary format: "RPM1" | u32-LE n_frames | u32-LE dim | n_frames*dim f64-LE, row-major.

inline constexpr char kBinaryMagic[4] = {'R', 'P', 'M', '1'};
inline constexpr std::size_t kBinaryHeaderBytes = 12;

FeatureMatrix parse_text_matrix(std::string_view text);
std::string format_text_matrix(const FeatureMatrix& m);

FeatureMatrix decode_binary_matrix(std::string_view bytes);
std::string encode_binary_matrix(const FeatureMatrix& m);

FeatureMatrix load_text_matrix(const std::filesystem::path& path);
FeatureMatrix load_binary_matrix(const std::filesystem::path& path);
void save_text_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
void save_binary_matrix(const FeatureMatrix& m, const std::filesystem::path& path);

/// Picks the binary decoder when the file starts with the magic bytes, text otherwise.
FeatureMatrix load_matrix(const std::filesystem::path& path);

/// One sample per line, shortest round-tripping decimal.
std::string format_waveform(const Waveform& w);
void save_waveform(const Waveform& w, const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `x`.
std::string shortest_decimal(double x);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace repcount
