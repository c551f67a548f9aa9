// SPDX-License-Identifier: Apache-2.0

#include "act/ppm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "act/error.hpp"

namespace act {

std::vector<std::uint8_t> encode_ppm(const Frame& frame) {
  const std::string header =
      "P6\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto px = frame.pixels();
  out.insert(out.end(), px.begin(), px.end());
  return out;
}

namespace {

// Reads one whitespace-delimited header integer, skipping '#' comments.
int read_header_int(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw Error(ErrorCode::ParseError, "ppm: malformed header");
  long v = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1'000'000) throw Error(ErrorCode::ParseError, "ppm: header value too large");
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace

Frame decode_ppm(const std::vector<std::uint8_t>& bytes, double timestamp) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw Error(ErrorCode::ParseError, "ppm: missing P6 magic");
  std::size_t pos = 2;
  const int w = read_header_int(bytes, pos);
  const int h = read_header_int(bytes, pos);
  const int maxval = read_header_int(bytes, pos);
  if (maxval != 255) throw Error(ErrorCode::ParseError, "ppm: only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw Error(ErrorCode::ParseError, "ppm: truncated header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
  if (bytes.size() - pos < n) throw Error(ErrorCode::ParseError, "ppm: truncated pixel data");
  std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                               bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return Frame(w, h, std::move(px), timestamp);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
  const auto bytes = encode_ppm(frame);
  write_file_bytes(path, std::string(bytes.begin(), bytes.end()));
}

Frame read_ppm(const std::filesystem::path& path, double timestamp) {
  return decode_ppm(read_file_bytes(path), timestamp);
}

std::string frame_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.ppm", index);
  return buf;
}

}  // namespace act
