/* Copyright 2026 The Polyseg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef POLYSEG_PNG_IO_HPP_
#define POLYSEG_PNG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "polyseg/core.hpp"

namespace polyseg {

// 8-bit single-channel raster.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;
};

// 8-bit interleaved RGB raster.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel
};

GrayImage read_gray_png(const std::string& path);
RgbImage read_rgb_png(const std::string& path);
void write_gray_png(const std::string& path, const GrayImage& image);
void write_rgb_png(const std::string& path, const RgbImage& image);

std::vector<std::uint8_t> encode_gray_png(const GrayImage& image);
std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image);
GrayImage decode_gray_png(const std::uint8_t* data, std::size_t size);
RgbImage decode_rgb_png(const std::uint8_t* data, std::size_t size);

// Benchmark ground truth masks are 8-bit PNGs with anti-aliased edges;
// loading binarizes at pixel > 127. Masks are written with foreground = 255.
BinaryMask mask_from_gray(const GrayImage& image);
GrayImage mask_to_gray(const BinaryMask& mask);
BinaryMask load_mask_png(const std::string& path);
void save_mask_png(const std::string& path, const BinaryMask& mask);

Frame load_frame_png(const std::string& path, int index = 0);
void save_frame_png(const std::string& path, const Frame& frame);

}  // namespace polyseg

#endif  // POLYSEG_PNG_IO_HPP_
