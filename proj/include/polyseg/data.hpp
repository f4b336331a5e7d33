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

#ifndef POLYSEG_DATA_HPP_
#define POLYSEG_DATA_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "polyseg/core.hpp"

namespace polyseg {

enum class DatasetKind { kImage, kVideo };
enum class SplitTag { kNone, kTrain, kEval };

struct ManifestSample {
  std::string id;
  std::string image_path;  // relative to the manifest root
  std::string mask_path;   // relative to the manifest root
  SplitTag split = SplitTag::kNone;
  std::string sequence_id;  // empty for image datasets
  std::string subset;       // e.g. "Seen-Easy"; empty if none
};

struct ValidationRecord {
  std::string kind;  // "missing_mask", "unreadable_mask", "warning", ...
  std::string sample;
  std::string message;
};

// Declarative index of one dataset: what to evaluate, where its rasters
// live, and how samples group into sequences and subsets.
struct DatasetManifest {
  std::string name;
  DatasetKind kind = DatasetKind::kImage;
  std::string root;
  std::vector<ManifestSample> samples;  // sorted by id
  std::vector<ValidationRecord> validation;
};

// Supported layout names: kvasir, cvc_clinic, cvc_colon, etis, cvc300,
// polypgen, sun_seg. Images pair with masks by filename stem; video layouts
// group frames into sequences by directory; sun_seg derives
// {Seen,Unseen} x {Easy,Hard} subset tags from its directory structure.
// Images lacking a mask are excluded with a validation record; a dataset
// with no usable samples is an error.
DatasetManifest scan_dataset(const std::string& root,
                             const std::string& layout_name);

struct SplitSpec {
  enum class Unit { kSample, kSequence };
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  Unit unit = Unit::kSample;
};

// Seeded shuffle of split units (samples, or whole sequences for video —
// sequences never straddle the split); the first ceil(train_fraction * n)
// units become train, the rest eval.
void split_manifest(DatasetManifest& manifest, const SplitSpec& spec);

// Detector-training annotation export: per image one text file with one
// "0 cx cy w h" line (center format, normalized, 6 decimals) per
// 4-connected mask component of at least min_area_px, ordered by
// (y_min, x_min). Empty masks produce empty files.
struct AnnotationExportReport {
  int files_written = 0;
  std::vector<ValidationRecord> errors;
};
AnnotationExportReport masks_to_detection_annotations(
    const DatasetManifest& manifest, const std::string& out_dir,
    long long min_area_px = 16);

// Desk-scale synthetic scenes: textured background plus 1..k deformed
// elliptical blobs with exact masks. Analytic per-blob boxes go to a
// boxes.json sidecar for round-trip tests. n_sequences > 0 generates a
// video dataset of the same scenes with slowly drifting blobs instead.
struct SynthSpec {
  int n_scenes = 20;
  int image_size = 64;
  int blobs_min = 1;
  int blobs_max = 3;
  std::uint64_t seed = 0;
  int n_sequences = 0;
  int frames_per_sequence = 12;
};
DatasetManifest synth_generate(const std::string& out_root,
                               const SynthSpec& spec);

// Manifest JSON round-trip.
void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

std::string sample_image_path(const DatasetManifest& manifest,
                              const ManifestSample& sample);
std::string sample_mask_path(const DatasetManifest& manifest,
                             const ManifestSample& sample);

}  // namespace polyseg

#endif  // POLYSEG_DATA_HPP_
