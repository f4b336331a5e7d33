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

#ifndef POLYSEG_VIDEO_HPP_
#define POLYSEG_VIDEO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "polyseg/backends.hpp"
#include "polyseg/core.hpp"
#include "polyseg/prompt_bridge.hpp"

namespace polyseg {

enum class PromptSelection { kFirstDetection, kFixedIndex };

struct VideoPolicy {
  PromptSelection prompt_selection = PromptSelection::kFirstDetection;
  int fixed_index = 0;             // used by kFixedIndex
  Direction direction = Direction::kForward;
  int re_detect_interval = 0;      // K frames; 0 = never re-detect
  double re_prompt_iou = 0.5;      // re-prompt when detection drifts below
  double prompt_expand = 1.0;      // prompt-box padding factor
};

// Why a frame's mask is what it is.
enum class Provenance { kPropagated, kEmptyNoPrompt, kEmptyNoDetection };

const char* provenance_name(Provenance p);

struct SequenceRun {
  std::string sequence_id;
  std::optional<int> prompt_frame;
  std::vector<BinaryMask> masks;       // one per frame
  std::vector<Provenance> provenance;  // one per frame
  int prompts_issued = 0;
};

// kFirstDetection: smallest frame index with a nonempty prompt set, absent
// when none. kFixedIndex: the configured index regardless of its prompt set
// (errors when out of range).
std::optional<int> select_prompt_frame(
    const std::vector<PromptSet>& per_frame_prompts, const VideoPolicy& policy);

// Pixelwise union. An empty list yields a zero mask of the declared shape.
BinaryMask merge_object_masks(const std::vector<BinaryMask>& masks, int height,
                              int width);

// Full per-sequence pipeline: pick the prompt frame from detector output,
// prompt a segmenter session, propagate, and merge per-object masks into one
// mask per frame. Frames outside propagation coverage get zero masks tagged
// kEmptyNoPrompt; a sequence with no surviving detection is all zeros tagged
// kEmptyNoDetection. With re_detect_interval K > 0 (mock backends only) the
// detector re-runs every K frames after the prompt frame and detections
// drifting below re_prompt_iou against the current merged mask's box add
// corrective prompts: the existing object with the highest box_iou >= 0.25
// is re-prompted, otherwise a new object id is allocated.
SequenceRun run_sequence(const std::string& sequence_id,
                         const std::vector<Frame>& frames,
                         const std::vector<BinaryMask>* gt_masks,
                         const DetectorSpec& detector,
                         const BridgePolicy& bridge, const VideoPolicy& policy,
                         SegmenterKind backend,
                         AdapterClient* adapter = nullptr);

}  // namespace polyseg

#endif  // POLYSEG_VIDEO_HPP_
