#include "repcount/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace repcount {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line_no, std::size_t col) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw Error(Errc::NonNumericField, "line " + std::to_string(line_no) + ", field " + std::to_string(col + 1) +
                                           ": '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(Errc::NonFiniteValue, "line " + std::to_string(line_no) + ", field " + std::to_string(col + 1));
  }
  return value;
}

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint64_t get_le(std::string_view bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string shortest_decimal(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw Error(Errc::IoFailure, "cannot format value");
  return std::string(buf.data(), ptr);
}

FeatureMatrix parse_text_matrix(std::string_view text) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (nl == std::string_view::npos && trim(line).empty()) break;  // no trailing newline

    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      values.push_back(parse_field(line.substr(start, comma - start), line_no, fields));
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      dim = fields;
    } else if (fields != dim) {
      throw Error(Errc::RaggedRows, "line " + std::to_string(line_no) + " has " + std::to_string(fields) +
                                        " fields, expected " + std::to_string(dim));
    }
    ++rows;
  }
  if (rows < 2) throw Error(Errc::TooFewFrames, "need at least 2 frames, got " + std::to_string(rows));

  FeatureMatrix::Storage m(static_cast<Index>(rows), static_cast<Index>(dim));
  std::copy(values.begin(), values.end(), m.data());
  return FeatureMatrix(std::move(m));
}

std::string format_text_matrix(const FeatureMatrix& m) {
  std::string out;
  const auto& v = m.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 0; j < v.cols(); ++j) {
      if (j) out.push_back(',');
      out += shortest_decimal(v(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

FeatureMatrix decode_binary_matrix(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBinaryMagic, 4) != 0) {
    throw Error(Errc::BadMagic, "expected leading bytes RPM1");
  }
  if (bytes.size() < kBinaryHeaderBytes) throw Error(Errc::TruncatedPayload, "header is shorter than 12 bytes");
  const auto n = get_le(bytes, 4, 4);
  const auto d = get_le(bytes, 8, 4);
  if (n < 2) throw Error(Errc::TooFewFrames, "need at least 2 frames, got " + std::to_string(n));
  if (d < 1) throw Error(Errc::InvalidDimension, "feature dimension must be at least 1");
  const std::uint64_t payload = n * d * 8;
  const std::uint64_t available = bytes.size() - kBinaryHeaderBytes;
  if (payload > available) {
    throw Error(Errc::TruncatedPayload, "declared " + std::to_string(payload) + " payload bytes, file holds " +
                                            std::to_string(available));
  }
  if (payload < available) throw Error(Errc::TrailingData, std::to_string(available - payload) + " unexpected bytes");

  FeatureMatrix::Storage m(static_cast<Index>(n), static_cast<Index>(d));
  std::size_t offset = kBinaryHeaderBytes;
  for (Index k = 0; k < m.size(); ++k, offset += 8) {
    m.data()[k] = std::bit_cast<double>(get_le(bytes, offset, 8));
  }
  return FeatureMatrix(std::move(m));
}

std::string encode_binary_matrix(const FeatureMatrix& m) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (static_cast<std::uint64_t>(m.n_frames()) > kMax || static_cast<std::uint64_t>(m.dim()) > kMax) {
    throw Error(Errc::IoFailure, "matrix too large for u32 header fields");
  }
  std::string out;
  out.reserve(kBinaryHeaderBytes + static_cast<std::size_t>(m.values().size()) * 8);
  out.append(kBinaryMagic, 4);
  put_u32_le(out, static_cast<std::uint32_t>(m.n_frames()));
  put_u32_le(out, static_cast<std::uint32_t>(m.dim()));
  const double* data = m.values().data();
  for (Index k = 0; k < m.values().size(); ++k) put_u64_le(out, std::bit_cast<std::uint64_t>(data[k]));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw Error(Errc::MissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoFailure, "read failed: " + path.string());
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open for writing: " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed: " + path.string());
}

FeatureMatrix load_text_matrix(const std::filesystem::path& path) { return parse_text_matrix(read_file(path)); }

FeatureMatrix load_binary_matrix(const std::filesystem::path& path) { return decode_binary_matrix(read_file(path)); }

void save_text_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  write_file(path, format_text_matrix(m));
}

void save_binary_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  write_file(path, encode_binary_matrix(m));
}

FeatureMatrix load_matrix(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kBinaryMagic, 4) == 0) return decode_binary_matrix(bytes);
  return parse_text_matrix(bytes);
}

std::string format_waveform(const Waveform& w) {
  std::string out;
  for (Index i = 0; i < w.size(); ++i) {
    out += shortest_decimal(w[i]);
    out.push_back('\n');
  }
  return out;
}

void save_waveform(const Waveform& w, const std::filesystem::path& path) { write_file(path, format_waveform(w)); }

}  // namespace repcount
