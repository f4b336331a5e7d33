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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include <json.hpp>

#include "polyseg/data.hpp"
#include "polyseg/png_io.hpp"

namespace polyseg {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& gen) {
  return (gen() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + std::min(static_cast<int>(uniform01(gen) * span), span - 1);
}

// Pixel-content noise keyed by position, independent of the draw order.
std::uint64_t pixel_hash(int x, int y, std::uint64_t salt) {
  return splitmix64(static_cast<std::uint64_t>(x) * 0x1F123BB5ULL ^
                    static_cast<std::uint64_t>(y) * 0x5851F42DULL ^ salt);
}

// Deformed ellipse: radius r0 * (1 + sum amp_m cos(m*theta + phase_m)) for
// harmonics m = 2..4, drifting at (vx, vy) pixels per frame.
struct Blob {
  double cx = 0, cy = 0, r0 = 0;
  double vx = 0, vy = 0;
  double amp[3] = {0, 0, 0};
  double phase[3] = {0, 0, 0};

  double radius(double theta) const {
    double r = 1.0;
    for (int m = 0; m < 3; ++m) {
      r += amp[m] * std::cos((m + 2) * theta + phase[m]);
    }
    return r0 * r;
  }

  double x_at(int frame) const { return cx + vx * frame; }
  double y_at(int frame) const { return cy + vy * frame; }

  bool contains(double px, double py, int frame) const {
    const double dx = px - x_at(frame);
    const double dy = py - y_at(frame);
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) return true;
    const double r = radius(std::atan2(dy, dx));
    return d2 <= r * r;
  }

  BBox analytic_box(int frame, int image_size) const {
    double xlo = 1e9, xhi = -1e9, ylo = 1e9, yhi = -1e9;
    constexpr int kSamples = 1024;
    for (int i = 0; i < kSamples; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / kSamples;
      const double r = radius(theta);
      xlo = std::min(xlo, x_at(frame) + r * std::cos(theta));
      xhi = std::max(xhi, x_at(frame) + r * std::cos(theta));
      ylo = std::min(ylo, y_at(frame) + r * std::sin(theta));
      yhi = std::max(yhi, y_at(frame) + r * std::sin(theta));
    }
    BBox box{static_cast<int>(std::floor(xlo)),
             static_cast<int>(std::floor(ylo)),
             static_cast<int>(std::ceil(xhi)),
             static_cast<int>(std::ceil(yhi))};
    box.x_min = std::max(0, box.x_min);
    box.y_min = std::max(0, box.y_min);
    box.x_max = std::min(image_size, box.x_max);
    box.y_max = std::min(image_size, box.y_max);
    return box;
  }
};

BBox dilate_clip(const BBox& box, int px, int size) {
  return BBox{std::max(0, box.x_min - px), std::max(0, box.y_min - px),
              std::min(size, box.x_max + px), std::min(size, box.y_max + px)};
}

bool boxes_overlap(const BBox& a, const BBox& b) {
  return std::min(a.x_max, b.x_max) > std::max(a.x_min, b.x_min) &&
         std::min(a.y_max, b.y_max) > std::max(a.y_min, b.y_min);
}

// Blob prompt boxes must stay disjoint after dilation so greedy NMS keeps
// one prompt per blob.
constexpr int kSeparationPx = 8;
constexpr int kBorderPx = 3;

std::vector<Blob> place_blobs(std::mt19937_64& gen, int size, int count,
                              int frames, bool moving) {
  std::vector<Blob> blobs;
  const double r_lo = 5.0;
  const double r_hi = std::min(9.0, size / 7.0);
  for (int b = 0; b < count; ++b) {
    for (int attempt = 0; attempt < 300; ++attempt) {
      Blob blob;
      blob.r0 = uniform(gen, r_lo, std::max(r_lo, r_hi));
      const double extent = blob.r0 * 1.30;
      double drift = 0.0;
      if (moving) {
        const double speed = uniform(gen, 0.10, 0.30);
        const double angle = uniform(gen, 0.0, 2.0 * std::numbers::pi);
        blob.vx = speed * std::cos(angle);
        blob.vy = speed * std::sin(angle);
        drift = speed * (frames - 1);
      }
      const double lo = kBorderPx + extent + drift;
      const double hi = size - kBorderPx - extent - drift;
      if (lo >= hi) continue;
      blob.cx = uniform(gen, lo, hi);
      blob.cy = uniform(gen, lo, hi);
      double total = 0.0;
      for (int m = 0; m < 3; ++m) {
        blob.amp[m] = uniform(gen, 0.0, 0.09);
        blob.phase[m] = uniform(gen, 0.0, 2.0 * std::numbers::pi);
        total += blob.amp[m];
      }
      (void)total;  // <= 0.27, keeps min radius above 0.7 * r0

      const BBox candidate =
          dilate_clip(blob.analytic_box(0, size), kSeparationPx, size);
      bool clash = false;
      for (const Blob& other : blobs) {
        if (boxes_overlap(candidate, other.analytic_box(0, size))) {
          clash = true;
          break;
        }
      }
      if (!clash) {
        blobs.push_back(blob);
        break;
      }
    }
  }
  return blobs;
}

struct Scene {
  Frame image;
  BinaryMask mask;
  std::vector<BBox> blob_boxes;
};

Scene render_scene(const std::vector<Blob>& blobs, int size, int frame,
                   std::uint64_t texture_salt) {
  Scene scene;
  scene.image = Frame(size, size);
  scene.mask = BinaryMask(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const std::uint64_t h = pixel_hash(x, y, texture_salt);
      const int n0 = static_cast<int>(h % 31) - 15;
      const int n1 = static_cast<int>((h >> 8) % 31) - 15;
      const int n2 = static_cast<int>((h >> 16) % 31) - 15;
      const std::size_t i = (static_cast<std::size_t>(y) * size + x) * 3;
      scene.image.rgb[i + 0] =
          static_cast<std::uint8_t>(std::clamp(150 + n0, 0, 255));
      scene.image.rgb[i + 1] =
          static_cast<std::uint8_t>(std::clamp(108 + n1, 0, 255));
      scene.image.rgb[i + 2] =
          static_cast<std::uint8_t>(std::clamp(96 + n2, 0, 255));
    }
  }
  for (const Blob& blob : blobs) {
    const BBox box = blob.analytic_box(frame, size);
    scene.blob_boxes.push_back(box);
    const BBox paint = dilate_clip(box, 2, size);
    for (int y = paint.y_min; y < paint.y_max; ++y) {
      for (int x = paint.x_min; x < paint.x_max; ++x) {
        if (!blob.contains(x + 0.5, y + 0.5, frame)) continue;
        scene.mask.at(y, x) = 1;
        const double dx = x + 0.5 - blob.x_at(frame);
        const double dy = y + 0.5 - blob.y_at(frame);
        const double d = std::sqrt(dx * dx + dy * dy);
        const double shade = 1.0 - 0.35 * std::min(1.0, d / blob.r0);
        const std::uint64_t h = pixel_hash(x, y, texture_salt ^ 0xB10BULL);
        const int n = static_cast<int>(h % 17) - 8;
        const std::size_t i = (static_cast<std::size_t>(y) * size + x) * 3;
        scene.image.rgb[i + 0] = static_cast<std::uint8_t>(
            std::clamp(static_cast<int>(205 * shade) + n, 0, 255));
        scene.image.rgb[i + 1] = static_cast<std::uint8_t>(
            std::clamp(static_cast<int>(110 * shade) + n, 0, 255));
        scene.image.rgb[i + 2] = static_cast<std::uint8_t>(
            std::clamp(static_cast<int>(95 * shade) + n, 0, 255));
      }
    }
  }
  return scene;
}

}  // namespace

DatasetManifest synth_generate(const std::string& out_root,
                               const SynthSpec& spec) {
  if (spec.n_scenes < 1 && spec.n_sequences < 1) {
    throw ContractError("synth_generate: need at least one scene");
  }
  if (spec.image_size < 48) {
    throw ContractError("synth_generate: image_size must be >= 48");
  }
  if (spec.blobs_min < 1 || spec.blobs_max < spec.blobs_min) {
    throw ContractError("synth_generate: bad blob count range");
  }

  const fs::path root(out_root);
  DatasetManifest manifest;
  manifest.name = "synthetic";
  manifest.root = root.generic_string();

  json sidecar = json::object();
  const bool video = spec.n_sequences > 0;
  manifest.kind = video ? DatasetKind::kVideo : DatasetKind::kImage;

  const auto add_sample = [&](const std::string& id, const Scene& scene,
                              const fs::path& image_rel,
                              const fs::path& mask_rel,
                              const std::string& sequence_id) {
    fs::create_directories((root / image_rel).parent_path());
    fs::create_directories((root / mask_rel).parent_path());
    save_frame_png((root / image_rel).string(), scene.image);
    save_mask_png((root / mask_rel).string(), scene.mask);
    ManifestSample sample;
    sample.id = id;
    sample.image_path = image_rel.generic_string();
    sample.mask_path = mask_rel.generic_string();
    sample.sequence_id = sequence_id;
    manifest.samples.push_back(sample);
    json boxes = json::array();
    for (const BBox& b : scene.blob_boxes) {
      boxes.push_back(json::array({b.x_min, b.y_min, b.x_max, b.y_max}));
    }
    sidecar[id] = std::move(boxes);
  };

  if (!video) {
    for (int i = 0; i < spec.n_scenes; ++i) {
      std::mt19937_64 gen(splitmix64(spec.seed ^ splitmix64(i)));
      const int count = uniform_int(gen, spec.blobs_min, spec.blobs_max);
      const auto blobs = place_blobs(gen, spec.image_size, count, 1, false);
      const Scene scene = render_scene(blobs, spec.image_size, 0,
                                       splitmix64(spec.seed) ^ i);
      char name[32];
      std::snprintf(name, sizeof(name), "scene_%03d", i);
      add_sample(name, scene, fs::path("images") / (std::string(name) + ".png"),
                 fs::path("masks") / (std::string(name) + ".png"), "");
    }
  } else {
    for (int s = 0; s < spec.n_sequences; ++s) {
      std::mt19937_64 gen(splitmix64(spec.seed ^ splitmix64(1000 + s)));
      const int count = uniform_int(gen, spec.blobs_min, spec.blobs_max);
      const auto blobs = place_blobs(gen, spec.image_size, count,
                                     spec.frames_per_sequence, true);
      char seq_name[32];
      std::snprintf(seq_name, sizeof(seq_name), "seq_%02d", s);
      for (int f = 0; f < spec.frames_per_sequence; ++f) {
        const Scene scene = render_scene(blobs, spec.image_size, f,
                                         splitmix64(spec.seed) ^ (777 + s));
        char frame_name[32];
        std::snprintf(frame_name, sizeof(frame_name), "f_%03d", f);
        const std::string id = std::string(seq_name) + "/" + frame_name;
        add_sample(id, scene,
                   fs::path("sequences") / seq_name / "images" /
                       (std::string(frame_name) + ".png"),
                   fs::path("sequences") / seq_name / "masks" /
                       (std::string(frame_name) + ".png"),
                   seq_name);
      }
    }
  }

  std::sort(manifest.samples.begin(), manifest.samples.end(),
            [](const ManifestSample& a, const ManifestSample& b) {
              return a.id < b.id;
            });

  fs::create_directories(root);
  std::ofstream boxes_out(root / "boxes.json");
  boxes_out << sidecar.dump(2) << "\n";
  save_manifest(manifest, (root / "manifest.json").string());
  return manifest;
}

}  // namespace polyseg
