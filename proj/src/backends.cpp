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

#include "polyseg/backends.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "polyseg/adapter.hpp"

namespace polyseg {
namespace {

// Components below this area are mask speckle, not plausible polyps.
constexpr long long kMinComponentAreaPx = 16;

// Mock tracking-region growth per elapsed frame, and its cap.
constexpr double kTrackGrowthPerFrame = 1.1;
constexpr double kTrackGrowthCap = 2.0;

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

int uniform_int(std::mt19937_64& gen, int lo, int hi) {  // inclusive bounds
  const int span = hi - lo + 1;
  const int k = static_cast<int>(uniform01(gen) * span);
  return lo + std::min(k, span - 1);
}

std::optional<BBox> jitter_box(const BBox& box, const JitterSpec& jitter,
                               int width, int height, std::mt19937_64& gen) {
  const double dx = uniform(gen, -jitter.shift_frac, jitter.shift_frac) *
                    box.width();
  const double dy = uniform(gen, -jitter.shift_frac, jitter.shift_frac) *
                    box.height();
  const double sw = 1.0 + uniform(gen, -jitter.scale_frac, jitter.scale_frac);
  const double sh = 1.0 + uniform(gen, -jitter.scale_frac, jitter.scale_frac);
  const double cx = 0.5 * (box.x_min + box.x_max) + dx;
  const double cy = 0.5 * (box.y_min + box.y_max) + dy;
  const double hw = 0.5 * box.width() * sw;
  const double hh = 0.5 * box.height() * sh;
  BBox out;
  out.x_min = std::max(0, static_cast<int>(std::floor(cx - hw)));
  out.y_min = std::max(0, static_cast<int>(std::floor(cy - hh)));
  out.x_max = std::min(width, static_cast<int>(std::ceil(cx + hw)));
  out.y_max = std::min(height, static_cast<int>(std::ceil(cy + hh)));
  if (!out.valid()) return std::nullopt;
  return out;
}

void check_boxes_in_frame(const Frame& frame, const std::vector<BBox>& boxes,
                          const char* what) {
  for (const BBox& b : boxes) {
    if (!b.valid() || b.x_max > frame.width || b.y_max > frame.height) {
      throw ContractError(std::string(what) + ": box outside frame bounds");
    }
  }
}

const BinaryMask& require_gt(const BinaryMask* gt, int height, int width,
                             const char* what) {
  if (gt == nullptr) {
    throw ContractError(std::string(what) + ": ground truth required");
  }
  if (gt->height != height || gt->width != width) {
    throw DimensionMismatch(std::string(what) +
                            ": ground truth does not match frame size");
  }
  return *gt;
}

}  // namespace

bool detection_less(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.box.area() != b.box.area()) return a.box.area() < b.box.area();
  if (a.box.x_min != b.box.x_min) return a.box.x_min < b.box.x_min;
  return a.box.y_min < b.box.y_min;
}

std::vector<Detection> detect(const Frame& frame, const DetectorSpec& spec,
                              const BinaryMask* gt, AdapterClient* adapter) {
  if (spec.kind == DetectorKind::kExternal) {
    if (adapter == nullptr) {
      throw ContractError("detect: external detector needs a live adapter");
    }
    auto dets = adapter->detect(frame, spec.input_size);
    std::sort(dets.begin(), dets.end(), detection_less);
    return dets;
  }

  const BinaryMask& truth =
      require_gt(gt, frame.height, frame.width, "detect(oracle)");
  std::vector<Detection> dets;
  const auto components = connected_components(truth, kMinComponentAreaPx);

  if (spec.jitter.zero()) {
    for (const Component& c : components) {
      dets.push_back(Detection{c.box, 1.0, 0});
    }
  } else {
    std::mt19937_64 gen(splitmix64(spec.seed) ^
                        splitmix64(static_cast<std::uint64_t>(frame.index)));
    for (const Component& c : components) {
      if (uniform01(gen) < spec.jitter.drop_prob) continue;
      const auto box =
          jitter_box(c.box, spec.jitter, frame.width, frame.height, gen);
      if (box) dets.push_back(Detection{*box, 1.0, 0});
    }
    if (uniform01(gen) < spec.jitter.spurious_prob) {
      const int side = std::max(
          1, static_cast<int>(std::lround(
                 uniform(gen, 0.10, 0.30) *
                 std::min(frame.width, frame.height))));
      if (side < frame.width && side < frame.height) {
        const int x0 = uniform_int(gen, 0, frame.width - side - 1);
        const int y0 = uniform_int(gen, 0, frame.height - side - 1);
        const double conf = uniform(gen, 0.3, 0.7);
        dets.push_back(Detection{BBox{x0, y0, x0 + side, y0 + side}, conf, 0});
      }
    }
  }
  std::sort(dets.begin(), dets.end(), detection_less);
  return dets;
}

std::vector<BinaryMask> segment_image(const Frame& frame,
                                      const std::vector<BBox>& boxes,
                                      SegmenterKind kind, const BinaryMask* gt,
                                      AdapterClient* adapter) {
  check_boxes_in_frame(frame, boxes, "segment_image");
  if (boxes.empty()) return {};

  switch (kind) {
    case SegmenterKind::kExternal: {
      if (adapter == nullptr) {
        throw ContractError("segment_image: external segmenter needs a live "
                            "adapter");
      }
      auto masks = adapter->segment(frame, boxes);
      if (masks.size() != boxes.size()) {
        throw BackendError("segment_image: adapter returned " +
                           std::to_string(masks.size()) + " masks for " +
                           std::to_string(boxes.size()) + " boxes");
      }
      for (const auto& m : masks) {
        if (m.height != frame.height || m.width != frame.width) {
          throw BackendError("segment_image: adapter mask size mismatch");
        }
      }
      return masks;
    }
    case SegmenterKind::kGtIntersect: {
      const BinaryMask& truth =
          require_gt(gt, frame.height, frame.width, "segment_image");
      std::vector<BinaryMask> out;
      out.reserve(boxes.size());
      for (const BBox& b : boxes) out.push_back(mask_and_box(truth, b));
      return out;
    }
    case SegmenterKind::kBoxFill: {
      std::vector<BinaryMask> out;
      out.reserve(boxes.size());
      for (const BBox& b : boxes) {
        out.push_back(box_fill_mask(frame.height, frame.width, b));
      }
      return out;
    }
    case SegmenterKind::kInscribedEllipse: {
      std::vector<BinaryMask> out;
      out.reserve(boxes.size());
      for (const BBox& b : boxes) {
        out.push_back(inscribed_ellipse_mask(frame.height, frame.width, b));
      }
      return out;
    }
  }
  throw ContractError("segment_image: unknown segmenter kind");
}

std::pair<int, int> SegmenterSession::coverage() const {
  if (prompts_.empty()) {
    throw ContractError("coverage: no prompts added");
  }
  if (direction_ == Direction::kBidirectional) return {0, frame_count_};
  int first = frame_count_;
  for (const auto& p : prompts_) first = std::min(first, p.frame_index);
  return {first, frame_count_};
}

SegmenterSession open_session(std::string sequence_id,
                              const std::vector<Frame>& frames,
                              SegmenterKind backend, Direction direction,
                              AdapterClient* adapter) {
  if (frames.empty()) {
    throw ContractError("open_session: empty sequence");
  }
  for (const Frame& f : frames) {
    if (f.height != frames[0].height || f.width != frames[0].width) {
      throw DimensionMismatch("open_session: frames differ in size");
    }
  }
  if (backend == SegmenterKind::kExternal) {
    if (adapter == nullptr) {
      throw ContractError("open_session: external backend needs a live "
                          "adapter");
    }
    adapter->video_init(frames);
  }
  SegmenterSession s;
  s.sequence_id_ = std::move(sequence_id);
  s.frame_count_ = static_cast<int>(frames.size());
  s.height_ = frames[0].height;
  s.width_ = frames[0].width;
  s.backend_ = backend;
  s.direction_ = direction;
  s.frames_ = &frames;
  s.adapter_ = adapter;
  return s;
}

void add_box_prompt(SegmenterSession& session, int frame_index, int object_id,
                    const BBox& box) {
  if (frame_index < 0 || frame_index >= session.frame_count_) {
    throw ContractError("add_box_prompt: frame " + std::to_string(frame_index) +
                        " outside sequence of " +
                        std::to_string(session.frame_count_) + " frames");
  }
  if (!box.valid() || box.x_max > session.width_ ||
      box.y_max > session.height_) {
    throw ContractError("add_box_prompt: box outside frame bounds");
  }
  for (const auto& p : session.prompts_) {
    if (p.frame_index == frame_index && p.object_id == object_id) {
      throw ContractError("add_box_prompt: duplicate prompt for object " +
                          std::to_string(object_id) + " at frame " +
                          std::to_string(frame_index));
    }
  }
  if (session.backend_ == SegmenterKind::kExternal) {
    session.adapter_->video_prompt(frame_index, object_id, box);
  }
  session.prompts_.push_back(PromptRecord{frame_index, object_id, box});
}

BinaryMask propagated_object_mask(const SegmenterSession& session,
                                  const PromptRecord& prompt, int frame_index,
                                  const BinaryMask* gt) {
  const int elapsed = std::abs(frame_index - prompt.frame_index);
  const double factor =
      std::min(std::pow(kTrackGrowthPerFrame, elapsed), kTrackGrowthCap);
  const BBox region = expand_and_clip(prompt.box, factor,
                                      session.frame_width(),
                                      session.frame_height());
  switch (session.backend()) {
    case SegmenterKind::kGtIntersect: {
      const BinaryMask& truth = require_gt(
          gt, session.frame_height(), session.frame_width(),
          "propagated_object_mask");
      return mask_and_box(truth, region);
    }
    case SegmenterKind::kBoxFill:
      return box_fill_mask(session.frame_height(), session.frame_width(),
                           region);
    case SegmenterKind::kInscribedEllipse:
      return inscribed_ellipse_mask(session.frame_height(),
                                    session.frame_width(), region);
    case SegmenterKind::kExternal:
      throw ContractError(
          "propagated_object_mask: external masks come from the adapter "
          "stream");
  }
  throw ContractError("propagated_object_mask: unknown segmenter kind");
}

const PromptRecord* governing_prompt(const SegmenterSession& session,
                                     int object_id, int frame_index) {
  const PromptRecord* before = nullptr;
  const PromptRecord* after = nullptr;
  for (const auto& p : session.prompts()) {
    if (p.object_id != object_id) continue;
    if (p.frame_index <= frame_index) {
      if (before == nullptr || p.frame_index > before->frame_index) {
        before = &p;
      }
    } else if (after == nullptr || p.frame_index < after->frame_index) {
      after = &p;
    }
  }
  if (before != nullptr) return before;
  return session.direction() == Direction::kBidirectional ? after : nullptr;
}

void propagate(SegmenterSession& session,
               const std::vector<BinaryMask>* gt_per_frame,
               const std::function<void(MaskEvent)>& sink) {
  if (session.prompts_.empty()) {
    throw ContractError("propagate: no prompts added");
  }

  if (session.backend_ == SegmenterKind::kExternal) {
    std::set<std::pair<int, int>> seen;
    session.adapter_->video_propagate([&](MaskEvent event) {
      if (event.frame_index < 0 || event.frame_index >= session.frame_count_) {
        throw BackendError("propagate: adapter emitted frame " +
                           std::to_string(event.frame_index) +
                           " outside the sequence");
      }
      if (!seen.insert({event.frame_index, event.object_id}).second) {
        throw BackendError("propagate: adapter emitted a duplicate "
                           "(frame, object) mask");
      }
      sink(std::move(event));
    });
    return;
  }

  if (session.backend_ == SegmenterKind::kGtIntersect) {
    if (gt_per_frame == nullptr ||
        static_cast<int>(gt_per_frame->size()) != session.frame_count_) {
      throw ContractError(
          "propagate: gt_intersect needs one ground-truth mask per frame");
    }
  }

  std::set<int> object_ids;
  for (const auto& p : session.prompts_) object_ids.insert(p.object_id);

  const auto [begin, end] = session.coverage();
  for (int f = begin; f < end; ++f) {
    for (int object_id : object_ids) {
      const PromptRecord* prompt = governing_prompt(session, object_id, f);
      if (prompt == nullptr) continue;  // forward pass, before first prompt
      const BinaryMask* gt =
          gt_per_frame != nullptr ? &(*gt_per_frame)[f] : nullptr;
      sink(MaskEvent{f, object_id,
                     propagated_object_mask(session, *prompt, f, gt)});
    }
  }
}

std::vector<MaskEvent> propagate(SegmenterSession& session,
                                 const std::vector<BinaryMask>* gt_per_frame) {
  std::vector<MaskEvent> events;
  propagate(session, gt_per_frame,
            [&](MaskEvent e) { events.push_back(std::move(e)); });
  return events;
}

}  // namespace polyseg
