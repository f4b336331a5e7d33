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

#ifndef POLYSEG_CORE_HPP_
#define POLYSEG_CORE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyseg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible raster dimensions (e.g. prediction vs ground truth).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A box became empty after scaling/clipping.
class DegenerateBox : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// External detector/segmenter adapter failed or broke protocol.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Bad run configuration or dataset validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Axis-aligned pixel box, half-open: [x_min, x_max) x [y_min, y_max).
// Origin is the top-left corner, x indexes columns.
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  long long area() const {
    return static_cast<long long>(width()) * height();
  }
  bool valid() const {
    return x_min >= 0 && y_min >= 0 && x_min < x_max && y_min < y_max;
  }
  bool contains(int x, int y) const {
    return x >= x_min && x < x_max && y >= y_min && y < y_max;
  }
  bool operator==(const BBox&) const = default;
};

// Dense H x W raster over {0,1}; 1 marks foreground.
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;  // row-major

  BinaryMask() = default;
  BinaryMask(int h, int w);

  std::uint8_t at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int y, int x) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const { return values.size(); }
  long long foreground_count() const;
  bool any_foreground() const { return foreground_count() > 0; }
  bool same_shape(const BinaryMask& other) const {
    return height == other.height && width == other.width;
  }
  bool operator==(const BinaryMask&) const = default;
};

// One RGB video frame (or standalone image). `index` is the position of
// the frame within its sequence; standalone images use the sample ordinal.
struct Frame {
  int height = 0;
  int width = 0;
  int index = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Frame() = default;
  Frame(int h, int w, int idx = 0);
};

// Pixelwise confusion counts of a prediction against ground truth.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Tightest half-open box covering all foreground pixels; nullopt for an
// empty mask.
std::optional<BBox> bbox_from_mask(const BinaryMask& mask);

// Intersection-over-union of two boxes by pixel area; 0 when disjoint.
double box_iou(const BBox& a, const BBox& b);

// Exact per-pixel confusion counts. Throws DimensionMismatch.
ConfusionCounts mask_confusion(const BinaryMask& pred, const BinaryMask& gt);

// Scales `box` about its center by `factor`, rounds outward (floor mins,
// ceil maxes) and clips to [0,image_width) x [0,image_height).
// Throws ContractError for factor <= 0, DegenerateBox if nothing remains.
BBox expand_and_clip(const BBox& box, double factor, int image_width,
                     int image_height);

// A 4-connected foreground component: its tight box and pixel area.
struct Component {
  BBox box;
  long long area = 0;
};

// 4-connected components with area >= min_area_px, ordered by
// (box.y_min, box.x_min).
std::vector<Component> connected_components(const BinaryMask& mask,
                                            long long min_area_px = 0);

// Mask restricted to a box: out(y,x) = mask(y,x) AND box.contains(x,y).
BinaryMask mask_and_box(const BinaryMask& mask, const BBox& box);

// Pixelwise OR. Throws DimensionMismatch.
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);

// Mask of the given shape whose foreground is exactly the box interior.
BinaryMask box_fill_mask(int height, int width, const BBox& box);

// Filled axis-aligned ellipse inscribed in `box`, rasterized at pixel
// centers.
BinaryMask inscribed_ellipse_mask(int height, int width, const BBox& box);

}  // namespace polyseg

#endif  // POLYSEG_CORE_HPP_
