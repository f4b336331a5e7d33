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

#include "polyseg/core.hpp"

#include <algorithm>
#include <cmath>

namespace polyseg {

BinaryMask::BinaryMask(int h, int w) : height(h), width(w) {
  if (h <= 0 || w <= 0) {
    throw ContractError("mask dimensions must be positive");
  }
  values.assign(static_cast<std::size_t>(h) * w, 0);
}

long long BinaryMask::foreground_count() const {
  long long n = 0;
  for (std::uint8_t v : values) n += v;
  return n;
}

Frame::Frame(int h, int w, int idx) : height(h), width(w), index(idx) {
  if (h <= 0 || w <= 0) {
    throw ContractError("frame dimensions must be positive");
  }
  rgb.assign(static_cast<std::size_t>(h) * w * 3, 0);
}

std::optional<BBox> bbox_from_mask(const BinaryMask& mask) {
  int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(y, x)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return std::nullopt;
  return BBox{x0, y0, x1 + 1, y1 + 1};
}

double box_iou(const BBox& a, const BBox& b) {
  const int iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const int ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const long long inter = static_cast<long long>(iw) * ih;
  const long long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

ConfusionCounts mask_confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (!pred.same_shape(gt)) {
    throw DimensionMismatch("mask_confusion: prediction is " +
                            std::to_string(pred.height) + "x" +
                            std::to_string(pred.width) + ", ground truth is " +
                            std::to_string(gt.height) + "x" +
                            std::to_string(gt.width));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const bool p = pred.values[i] != 0;
    const bool g = gt.values[i] != 0;
    if (p && g)
      ++c.tp;
    else if (p && !g)
      ++c.fp;
    else if (!p && g)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

BBox expand_and_clip(const BBox& box, double factor, int image_width,
                     int image_height) {
  if (factor <= 0.0) {
    throw ContractError("expand_and_clip: factor must be positive");
  }
  if (!box.valid()) {
    throw ContractError("expand_and_clip: invalid input box");
  }
  const double cx = 0.5 * (box.x_min + box.x_max);
  const double cy = 0.5 * (box.y_min + box.y_max);
  const double hw = 0.5 * box.width() * factor;
  const double hh = 0.5 * box.height() * factor;
  BBox out;
  out.x_min = std::max(0, static_cast<int>(std::floor(cx - hw)));
  out.y_min = std::max(0, static_cast<int>(std::floor(cy - hh)));
  out.x_max = std::min(image_width, static_cast<int>(std::ceil(cx + hw)));
  out.y_max = std::min(image_height, static_cast<int>(std::ceil(cy + hh)));
  if (out.x_min >= out.x_max || out.y_min >= out.y_max) {
    throw DegenerateBox("expand_and_clip: box empty after clipping");
  }
  return out;
}

std::vector<Component> connected_components(const BinaryMask& mask,
                                            long long min_area_px) {
  std::vector<std::uint8_t> seen(mask.pixel_count(), 0);
  std::vector<Component> comps;
  std::vector<int> stack;
  const int w = mask.width;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.values[idx] || seen[idx]) continue;
      Component comp;
      comp.box = BBox{x, y, x + 1, y + 1};
      seen[idx] = 1;
      stack.push_back(static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cy = cur / w;
        const int cx = cur % w;
        ++comp.area;
        comp.box.x_min = std::min(comp.box.x_min, cx);
        comp.box.y_min = std::min(comp.box.y_min, cy);
        comp.box.x_max = std::max(comp.box.x_max, cx + 1);
        comp.box.y_max = std::max(comp.box.y_max, cy + 1);
        const int nbr[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1},
                               {cx, cy + 1}};
        for (const auto& n : nbr) {
          const int nx = n[0], ny = n[1];
          if (nx < 0 || nx >= w || ny < 0 || ny >= mask.height) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
          if (mask.values[nidx] && !seen[nidx]) {
            seen[nidx] = 1;
            stack.push_back(static_cast<int>(nidx));
          }
        }
      }
      if (comp.area >= min_area_px) comps.push_back(comp);
    }
  }
  std::sort(comps.begin(), comps.end(), [](const Component& a,
                                           const Component& b) {
    if (a.box.y_min != b.box.y_min) return a.box.y_min < b.box.y_min;
    return a.box.x_min < b.box.x_min;
  });
  return comps;
}

BinaryMask mask_and_box(const BinaryMask& mask, const BBox& box) {
  BinaryMask out(mask.height, mask.width);
  const int y0 = std::max(0, box.y_min);
  const int y1 = std::min(mask.height, box.y_max);
  const int x0 = std::max(0, box.x_min);
  const int x1 = std::min(mask.width, box.x_max);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      out.at(y, x) = mask.at(y, x);
    }
  }
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("mask_or: shapes differ");
  }
  BinaryMask out(a.height, a.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (a.values[i] || b.values[i]) ? 1 : 0;
  }
  return out;
}

BinaryMask box_fill_mask(int height, int width, const BBox& box) {
  BinaryMask out(height, width);
  const int y0 = std::max(0, box.y_min);
  const int y1 = std::min(height, box.y_max);
  const int x0 = std::max(0, box.x_min);
  const int x1 = std::min(width, box.x_max);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      out.at(y, x) = 1;
    }
  }
  return out;
}

BinaryMask inscribed_ellipse_mask(int height, int width, const BBox& box) {
  BinaryMask out(height, width);
  const double cx = 0.5 * (box.x_min + box.x_max);
  const double cy = 0.5 * (box.y_min + box.y_max);
  const double rx = 0.5 * box.width();
  const double ry = 0.5 * box.height();
  const int y0 = std::max(0, box.y_min);
  const int y1 = std::min(height, box.y_max);
  const int x0 = std::max(0, box.x_min);
  const int x1 = std::min(width, box.x_max);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const double dx = (x + 0.5 - cx) / rx;
      const double dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) out.at(y, x) = 1;
    }
  }
  return out;
}

}  // namespace polyseg
