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

#ifndef POLYSEG_BACKENDS_HPP_
#define POLYSEG_BACKENDS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyseg/core.hpp"

namespace polyseg {

class AdapterClient;

struct Detection {
  BBox box;
  double confidence = 0.0;
  int class_id = 0;  // 0 = polyp
};

// Canonical detection order: confidence descending, ties by smaller area,
// then smaller x_min, then smaller y_min.
bool detection_less(const Detection& a, const Detection& b);

enum class DetectorKind { kOracle, kExternal };

// Detector error model applied on top of oracle boxes: the center of each
// box shifts by uniform(+-shift_frac * side), each side scales by
// (1 + uniform(+-scale_frac)), whole detections drop with drop_prob, and a
// spurious box (random position, side uniform in [10%, 30%] of the image
// side, confidence uniform in [0.3, 0.7]) appears with spurious_prob.
struct JitterSpec {
  double shift_frac = 0.0;
  double scale_frac = 0.0;
  double drop_prob = 0.0;
  double spurious_prob = 0.0;

  bool zero() const {
    return shift_frac == 0 && scale_frac == 0 && drop_prob == 0 &&
           spurious_prob == 0;
  }
};

struct DetectorSpec {
  DetectorKind kind = DetectorKind::kOracle;
  JitterSpec jitter;
  std::uint64_t seed = 0;
  int input_size = 680;  // forwarded to external adapters
};

enum class SegmenterKind { kBoxFill, kGtIntersect, kInscribedEllipse,
                           kExternal };

enum class Direction { kForward, kBidirectional };

// One detection pass over a frame. The oracle kind emits one detection per
// 4-connected ground-truth component of at least 16 px (confidence 1.0),
// then perturbs them per the jitter spec; results are deterministic given
// (frame, spec, seed) with the frame index salting the RNG stream.
std::vector<Detection> detect(const Frame& frame, const DetectorSpec& spec,
                              const BinaryMask* gt = nullptr,
                              AdapterClient* adapter = nullptr);

// One mask per input box, in input order. Mock kinds: kBoxFill fills the
// box, kGtIntersect intersects the ground truth with the box interior,
// kInscribedEllipse fills the inscribed axis-aligned ellipse.
std::vector<BinaryMask> segment_image(const Frame& frame,
                                      const std::vector<BBox>& boxes,
                                      SegmenterKind kind,
                                      const BinaryMask* gt = nullptr,
                                      AdapterClient* adapter = nullptr);

struct PromptRecord {
  int frame_index = 0;
  int object_id = 0;
  BBox box;
};

struct MaskEvent {
  int frame_index = 0;
  int object_id = 0;
  BinaryMask mask;
};

// Stateful prompt-then-propagate handle over one frame sequence. Strictly
// sequential, single owner; distinct sessions may run in parallel.
class SegmenterSession {
 public:
  const std::string& sequence_id() const { return sequence_id_; }
  int frame_count() const { return frame_count_; }
  int frame_height() const { return height_; }
  int frame_width() const { return width_; }
  Direction direction() const { return direction_; }
  SegmenterKind backend() const { return backend_; }
  const std::vector<PromptRecord>& prompts() const { return prompts_; }

  // First and one-past-last propagated frame given the current prompts:
  // forward covers [min prompt frame, N), bidirectional covers [0, N).
  std::pair<int, int> coverage() const;

 private:
  friend SegmenterSession open_session(std::string sequence_id,
                                       const std::vector<Frame>& frames,
                                       SegmenterKind backend,
                                       Direction direction,
                                       AdapterClient* adapter);
  friend void add_box_prompt(SegmenterSession& session, int frame_index,
                             int object_id, const BBox& box);
  friend void propagate(SegmenterSession& session,
                        const std::vector<BinaryMask>* gt_per_frame,
                        const std::function<void(MaskEvent)>& sink);

  std::string sequence_id_;
  int frame_count_ = 0;
  int height_ = 0;
  int width_ = 0;
  SegmenterKind backend_ = SegmenterKind::kGtIntersect;
  Direction direction_ = Direction::kForward;
  std::vector<PromptRecord> prompts_;
  const std::vector<Frame>* frames_ = nullptr;  // non-owning
  AdapterClient* adapter_ = nullptr;
};

// Opens a session over a nonempty ordered frame sequence. The frames vector
// must outlive the session.
SegmenterSession open_session(std::string sequence_id,
                              const std::vector<Frame>& frames,
                              SegmenterKind backend,
                              Direction direction = Direction::kForward,
                              AdapterClient* adapter = nullptr);

// Records a box prompt. Errors on out-of-range frame index and on a
// duplicate (frame, object) pair.
void add_box_prompt(SegmenterSession& session, int frame_index, int object_id,
                    const BBox& box);

// Emits one mask per covered frame and prompted object, frames ascending and
// object ids ascending within a frame. Mock kinds derive each mask from the
// object's governing prompt box expanded by 1.1 per elapsed frame (capped at
// 2.0); kGtIntersect additionally needs per-frame ground truth. Errors if no
// prompt was added.
void propagate(SegmenterSession& session,
               const std::vector<BinaryMask>* gt_per_frame,
               const std::function<void(MaskEvent)>& sink);
std::vector<MaskEvent> propagate(SegmenterSession& session,
                                 const std::vector<BinaryMask>* gt_per_frame
                                 = nullptr);

// Mask of one object at `frame_index` as the mock backends produce it from
// its governing prompt: the prompt box expanded by 1.1 per elapsed frame
// (capped at 2.0), rendered per the session's segmenter kind. kGtIntersect
// needs the frame's ground truth.
BinaryMask propagated_object_mask(const SegmenterSession& session,
                                  const PromptRecord& prompt, int frame_index,
                                  const BinaryMask* gt);

// Governing prompt of an object at a frame: its latest prompt at or before
// the frame, else (bidirectional sessions only) its earliest later prompt.
// nullptr when the object has no governing prompt there.
const PromptRecord* governing_prompt(const SegmenterSession& session,
                                     int object_id, int frame_index);

}  // namespace polyseg

#endif  // POLYSEG_BACKENDS_HPP_
