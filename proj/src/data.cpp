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

#include "polyseg/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "polyseg/png_io.hpp"

namespace polyseg {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kImageExtensions = {".png", ".jpg", ".jpeg",
                                                ".tif", ".tiff", ".bmp"};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return kImageExtensions.count(ext) > 0;
}

// stem -> filename, for extension-insensitive pairing
std::map<std::string, std::string> collect_stems(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      out[entry.path().stem().string()] = entry.path().filename().string();
    }
  }
  return out;
}

std::string relpath(const fs::path& p, const fs::path& root) {
  return fs::relative(p, root).generic_string();
}

// Pairs images with masks by stem; images lacking a mask are excluded with
// a validation record.
void pair_directories(const fs::path& root, const fs::path& image_dir,
                      const fs::path& mask_dir, const std::string& id_prefix,
                      const std::string& sequence_id,
                      const std::string& subset, DatasetManifest& manifest) {
  const auto images = collect_stems(image_dir);
  const auto masks = collect_stems(mask_dir);
  for (const auto& [stem, filename] : images) {
    const auto it = masks.find(stem);
    const std::string id = id_prefix.empty() ? stem : id_prefix + "/" + stem;
    if (it == masks.end()) {
      manifest.validation.push_back(ValidationRecord{
          "missing_mask", id, "no mask paired with " + filename});
      continue;
    }
    ManifestSample sample;
    sample.id = id;
    sample.image_path = relpath(image_dir / filename, root);
    sample.mask_path = relpath(mask_dir / it->second, root);
    sample.sequence_id = sequence_id;
    sample.subset = subset;
    manifest.samples.push_back(std::move(sample));
  }
}

void scan_image_pairs(
    const fs::path& root,
    const std::vector<std::pair<std::string, std::string>>& candidates,
    DatasetManifest& manifest) {
  for (const auto& [image_dir, mask_dir] : candidates) {
    if (fs::is_directory(root / image_dir) &&
        fs::is_directory(root / mask_dir)) {
      pair_directories(root, root / image_dir, root / mask_dir, "", "", "",
                       manifest);
      return;
    }
  }
  throw ConfigError("no image/mask directories found under '" +
                    root.string() + "'");
}

void scan_sequences(const fs::path& root, const fs::path& sequences_dir,
                    DatasetManifest& manifest) {
  std::vector<fs::path> seq_dirs;
  for (const auto& entry : fs::directory_iterator(sequences_dir)) {
    if (entry.is_directory()) seq_dirs.push_back(entry.path());
  }
  std::sort(seq_dirs.begin(), seq_dirs.end());
  for (const auto& seq : seq_dirs) {
    pair_directories(root, seq / "images", seq / "masks",
                     seq.filename().string(), seq.filename().string(), "",
                     manifest);
  }
}

void scan_sun_seg(const fs::path& root, DatasetManifest& manifest) {
  const std::pair<std::string, std::string> difficulty_dirs[] = {
      {"TestEasyDataset", "Easy"}, {"TestHardDataset", "Hard"}};
  const char* split_dirs[] = {"Seen", "Unseen"};
  for (const auto& [dir, difficulty] : difficulty_dirs) {
    for (const char* seen : split_dirs) {
      const fs::path base = root / dir / seen;
      if (!fs::is_directory(base / "Frame")) continue;
      const std::string subset = std::string(seen) + "-" + difficulty;
      std::vector<fs::path> cases;
      for (const auto& entry : fs::directory_iterator(base / "Frame")) {
        if (entry.is_directory()) cases.push_back(entry.path());
      }
      std::sort(cases.begin(), cases.end());
      for (const auto& case_dir : cases) {
        const std::string case_name = case_dir.filename().string();
        const std::string seq_id = subset + "/" + case_name;
        pair_directories(root, case_dir, base / "GT" / case_name, seq_id,
                         seq_id, subset, manifest);
      }
    }
  }
}

}  // namespace

DatasetManifest scan_dataset(const std::string& root,
                             const std::string& layout_name) {
  if (!fs::is_directory(root)) {
    throw ConfigError("dataset root '" + root + "' does not exist");
  }
  DatasetManifest manifest;
  manifest.name = layout_name;
  manifest.root = fs::path(root).generic_string();
  const fs::path r(root);

  if (layout_name == "kvasir" || layout_name == "cvc_colon" ||
      layout_name == "etis" || layout_name == "cvc300") {
    manifest.kind = DatasetKind::kImage;
    scan_image_pairs(r, {{"images", "masks"}}, manifest);
  } else if (layout_name == "cvc_clinic") {
    manifest.kind = DatasetKind::kImage;
    scan_image_pairs(r, {{"Original", "Ground Truth"}, {"images", "masks"}},
                     manifest);
  } else if (layout_name == "polypgen") {
    if (fs::is_directory(r / "sequences")) {
      manifest.kind = DatasetKind::kVideo;
      scan_sequences(r, r / "sequences", manifest);
    } else {
      manifest.kind = DatasetKind::kImage;
      scan_image_pairs(r, {{"images", "masks"}}, manifest);
    }
  } else if (layout_name == "sun_seg") {
    manifest.kind = DatasetKind::kVideo;
    scan_sun_seg(r, manifest);
  } else {
    throw ConfigError("unknown dataset layout '" + layout_name + "'");
  }

  std::sort(manifest.samples.begin(), manifest.samples.end(),
            [](const ManifestSample& a, const ManifestSample& b) {
              return a.id < b.id;
            });
  if (manifest.samples.empty()) {
    throw ConfigError("dataset '" + root + "' (" + layout_name +
                      ") contains no usable samples");
  }
  return manifest;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Fisher-Yates with explicit draws, deterministic across platforms.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 gen(splitmix64(seed));
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>((gen() >> 11) * 0x1.0p-53 * i);
    std::swap(items[i - 1], items[std::min(j, i - 1)]);
  }
}

}  // namespace

void split_manifest(DatasetManifest& manifest, const SplitSpec& spec) {
  if (spec.train_fraction <= 0.0 || spec.train_fraction > 1.0) {
    throw ConfigError("split: train_fraction must be in (0, 1]");
  }
  if (manifest.kind == DatasetKind::kVideo &&
      spec.unit != SplitSpec::Unit::kSequence) {
    throw ContractError(
        "split: video datasets must be split by sequence so no sequence "
        "straddles the split");
  }

  std::vector<std::string> units;
  if (spec.unit == SplitSpec::Unit::kSequence) {
    std::set<std::string> seen;
    for (const auto& s : manifest.samples) seen.insert(s.sequence_id);
    units.assign(seen.begin(), seen.end());
  } else {
    for (const auto& s : manifest.samples) units.push_back(s.id);
  }
  seeded_shuffle(units, spec.seed);

  const auto n_train = static_cast<std::size_t>(
      std::ceil(spec.train_fraction * static_cast<double>(units.size()) -
                1e-9));
  std::set<std::string> train_units(units.begin(),
                                    units.begin() + std::min(n_train,
                                                             units.size()));
  for (auto& s : manifest.samples) {
    const std::string& key =
        spec.unit == SplitSpec::Unit::kSequence ? s.sequence_id : s.id;
    s.split = train_units.count(key) ? SplitTag::kTrain : SplitTag::kEval;
  }
  if (n_train >= units.size()) {
    manifest.validation.push_back(ValidationRecord{
        "warning", "", "evaluation split is empty (train_fraction = 1)"});
  }
}

AnnotationExportReport masks_to_detection_annotations(
    const DatasetManifest& manifest, const std::string& out_dir,
    long long min_area_px) {
  AnnotationExportReport report;
  for (const auto& sample : manifest.samples) {
    BinaryMask mask;
    try {
      mask = load_mask_png(sample_mask_path(manifest, sample));
    } catch (const Error& e) {
      report.errors.push_back(
          ValidationRecord{"unreadable_mask", sample.id, e.what()});
      continue;
    }
    const fs::path out_path = fs::path(out_dir) / (sample.id + ".txt");
    fs::create_directories(out_path.parent_path());
    std::ofstream out(out_path);
    if (!out) {
      report.errors.push_back(ValidationRecord{
          "write_failed", sample.id, "cannot open " + out_path.string()});
      continue;
    }
    for (const Component& c : connected_components(mask, min_area_px)) {
      const double cx = 0.5 * (c.box.x_min + c.box.x_max) / mask.width;
      const double cy = 0.5 * (c.box.y_min + c.box.y_max) / mask.height;
      const double w = static_cast<double>(c.box.width()) / mask.width;
      const double h = static_cast<double>(c.box.height()) / mask.height;
      char line[96];
      std::snprintf(line, sizeof(line), "0 %.6f %.6f %.6f %.6f\n", cx, cy, w,
                    h);
      out << line;
    }
    ++report.files_written;
  }
  return report;
}

namespace {

const char* kind_name(DatasetKind kind) {
  return kind == DatasetKind::kImage ? "image" : "video";
}

const char* split_name(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain:
      return "train";
    case SplitTag::kEval:
      return "eval";
    case SplitTag::kNone:
      break;
  }
  return nullptr;
}

}  // namespace

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  json samples = json::array();
  for (const auto& s : manifest.samples) {
    json j{{"id", s.id},
           {"image", s.image_path},
           {"mask", s.mask_path},
           {"split", s.split == SplitTag::kNone
                         ? json(nullptr)
                         : json(split_name(s.split))},
           {"sequence",
            s.sequence_id.empty() ? json(nullptr) : json(s.sequence_id)},
           {"subset", s.subset.empty() ? json(nullptr) : json(s.subset)}};
    samples.push_back(std::move(j));
  }
  json validation = json::array();
  for (const auto& v : manifest.validation) {
    validation.push_back(
        json{{"kind", v.kind}, {"sample", v.sample}, {"message", v.message}});
  }
  const json doc{{"name", manifest.name},
                 {"kind", kind_name(manifest.kind)},
                 {"root", manifest.root},
                 {"samples", samples},
                 {"validation", validation}};
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write manifest '" + path + "'");
  out << doc.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest '" + path + "': " + e.what());
  }
  DatasetManifest manifest;
  manifest.name = doc.at("name").get<std::string>();
  manifest.kind = doc.at("kind").get<std::string>() == "video"
                      ? DatasetKind::kVideo
                      : DatasetKind::kImage;
  manifest.root = doc.at("root").get<std::string>();
  for (const auto& j : doc.at("samples")) {
    ManifestSample s;
    s.id = j.at("id").get<std::string>();
    s.image_path = j.at("image").get<std::string>();
    s.mask_path = j.at("mask").get<std::string>();
    if (j.contains("split") && !j["split"].is_null()) {
      s.split = j["split"].get<std::string>() == "train" ? SplitTag::kTrain
                                                         : SplitTag::kEval;
    }
    if (j.contains("sequence") && !j["sequence"].is_null()) {
      s.sequence_id = j["sequence"].get<std::string>();
    }
    if (j.contains("subset") && !j["subset"].is_null()) {
      s.subset = j["subset"].get<std::string>();
    }
    manifest.samples.push_back(std::move(s));
  }
  if (doc.contains("validation")) {
    for (const auto& j : doc["validation"]) {
      manifest.validation.push_back(ValidationRecord{
          j.value("kind", ""), j.value("sample", ""), j.value("message", "")});
    }
  }
  return manifest;
}

std::string sample_image_path(const DatasetManifest& manifest,
                              const ManifestSample& sample) {
  return (fs::path(manifest.root) / sample.image_path).string();
}

std::string sample_mask_path(const DatasetManifest& manifest,
                             const ManifestSample& sample) {
  return (fs::path(manifest.root) / sample.mask_path).string();
}

}  // namespace polyseg
