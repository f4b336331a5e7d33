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

#include "polyseg/png_io.hpp"

#include <png.h>

#include <cstring>

namespace polyseg {
namespace {

png_image make_image() {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  return image;
}

[[noreturn]] void fail(png_image& image, const std::string& what) {
  std::string msg = what;
  if (image.message[0] != '\0') {
    msg += ": ";
    msg += image.message;
  }
  png_image_free(&image);
  throw Error(msg);
}

template <typename Out>
Out finish_read(png_image& image, png_uint_32 format, int channels,
                const std::string& what) {
  image.format = format;
  Out out;
  out.height = static_cast<int>(image.height);
  out.width = static_cast<int>(image.width);
  out.pixels.resize(static_cast<std::size_t>(out.height) * out.width *
                    channels);
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    fail(image, what);
  }
  return out;
}

}  // namespace

GrayImage read_gray_png(const std::string& path) {
  png_image image = make_image();
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    fail(image, "failed to open PNG '" + path + "'");
  }
  return finish_read<GrayImage>(image, PNG_FORMAT_GRAY, 1,
                                "failed to read PNG '" + path + "'");
}

RgbImage read_rgb_png(const std::string& path) {
  png_image image = make_image();
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    fail(image, "failed to open PNG '" + path + "'");
  }
  return finish_read<RgbImage>(image, PNG_FORMAT_RGB, 3,
                               "failed to read PNG '" + path + "'");
}

GrayImage decode_gray_png(const std::uint8_t* data, std::size_t size) {
  png_image image = make_image();
  if (!png_image_begin_read_from_memory(&image, data, size)) {
    fail(image, "failed to decode PNG buffer");
  }
  return finish_read<GrayImage>(image, PNG_FORMAT_GRAY, 1,
                                "failed to decode PNG buffer");
}

RgbImage decode_rgb_png(const std::uint8_t* data, std::size_t size) {
  png_image image = make_image();
  if (!png_image_begin_read_from_memory(&image, data, size)) {
    fail(image, "failed to decode PNG buffer");
  }
  return finish_read<RgbImage>(image, PNG_FORMAT_RGB, 3,
                               "failed to decode PNG buffer");
}

namespace {

void check_shape(int height, int width, std::size_t pixels, int channels) {
  if (height <= 0 || width <= 0 ||
      pixels != static_cast<std::size_t>(height) * width * channels) {
    throw ContractError("PNG write: image buffer does not match dimensions");
  }
}

void write_file(const std::string& path, int height, int width,
                png_uint_32 format, const std::uint8_t* pixels) {
  png_image image = make_image();
  image.height = static_cast<png_uint_32>(height);
  image.width = static_cast<png_uint_32>(width);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels, 0, nullptr)) {
    fail(image, "failed to write PNG '" + path + "'");
  }
  png_image_free(&image);
}

std::vector<std::uint8_t> write_memory(int height, int width,
                                       png_uint_32 format,
                                       const std::uint8_t* pixels) {
  png_image image = make_image();
  image.height = static_cast<png_uint_32>(height);
  image.width = static_cast<png_uint_32>(width);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0,
                                 nullptr)) {
    fail(image, "failed to size PNG buffer");
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0,
                                 nullptr)) {
    fail(image, "failed to encode PNG buffer");
  }
  out.resize(size);
  png_image_free(&image);
  return out;
}

}  // namespace

void write_gray_png(const std::string& path, const GrayImage& image) {
  check_shape(image.height, image.width, image.pixels.size(), 1);
  write_file(path, image.height, image.width, PNG_FORMAT_GRAY,
             image.pixels.data());
}

void write_rgb_png(const std::string& path, const RgbImage& image) {
  check_shape(image.height, image.width, image.pixels.size(), 3);
  write_file(path, image.height, image.width, PNG_FORMAT_RGB,
             image.pixels.data());
}

std::vector<std::uint8_t> encode_gray_png(const GrayImage& image) {
  check_shape(image.height, image.width, image.pixels.size(), 1);
  return write_memory(image.height, image.width, PNG_FORMAT_GRAY,
                      image.pixels.data());
}

std::vector<std::uint8_t> encode_rgb_png(const RgbImage& image) {
  check_shape(image.height, image.width, image.pixels.size(), 3);
  return write_memory(image.height, image.width, PNG_FORMAT_RGB,
                      image.pixels.data());
}

BinaryMask mask_from_gray(const GrayImage& image) {
  BinaryMask mask(image.height, image.width);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    mask.values[i] = image.pixels[i] > 127 ? 1 : 0;
  }
  return mask;
}

GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage image;
  image.height = mask.height;
  image.width = mask.width;
  image.pixels.resize(mask.values.size());
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    image.pixels[i] = mask.values[i] ? 255 : 0;
  }
  return image;
}

BinaryMask load_mask_png(const std::string& path) {
  return mask_from_gray(read_gray_png(path));
}

void save_mask_png(const std::string& path, const BinaryMask& mask) {
  write_gray_png(path, mask_to_gray(mask));
}

Frame load_frame_png(const std::string& path, int index) {
  RgbImage image = read_rgb_png(path);
  Frame frame(image.height, image.width, index);
  frame.rgb = std::move(image.pixels);
  return frame;
}

void save_frame_png(const std::string& path, const Frame& frame) {
  RgbImage image;
  image.height = frame.height;
  image.width = frame.width;
  image.pixels = frame.rgb;
  write_rgb_png(path, image);
}

}  // namespace polyseg
