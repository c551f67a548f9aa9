// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "act/frame.hpp"

namespace act {

/// Binary PPM ("P6", maxval 255). Header is "P6\n<w> <h>\n255\n".
std::vector<std::uint8_t> encode_ppm(const Frame& frame);
Frame decode_ppm(const std::vector<std::uint8_t>& bytes, double timestamp = 0.0);

void write_ppm(const std::filesystem::path& path, const Frame& frame);
Frame read_ppm(const std::filesystem::path& path, double timestamp = 0.0);

/// frame_%06d.ppm
std::string frame_filename(std::size_t index);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace act
