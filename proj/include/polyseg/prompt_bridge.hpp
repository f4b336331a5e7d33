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

#ifndef POLYSEG_PROMPT_BRIDGE_HPP_
#define POLYSEG_PROMPT_BRIDGE_HPP_

#include <vector>

#include "polyseg/backends.hpp"
#include "polyseg/core.hpp"

namespace polyseg {

enum class EmptyPolicy { kEmptyMask };

// How raw detections become segmenter prompts.
struct BridgePolicy {
  double conf_threshold = 0.25;
  double nms_iou = 0.5;
  int max_prompts = 5;
  EmptyPolicy empty_policy = EmptyPolicy::kEmptyMask;
};

struct PromptEntry {
  int object_id = 0;  // 1..n, consecutive
  BBox box;
};

// The prompts handed to the segmenter for one frame. empty_flag is true
// exactly when no detection survived the bridge.
struct PromptSet {
  int frame_index = 0;
  std::vector<PromptEntry> entries;
  bool empty_flag = true;
};

// Greedy non-maximum suppression: keep the best detection (canonical
// detection order), drop any remaining one whose box_iou with a kept box
// reaches `iou_threshold`, repeat.
std::vector<Detection> nms(std::vector<Detection> detections,
                           double iou_threshold);

// conf >= threshold filter, then NMS, then truncation to max_prompts
// (highest confidence first); survivors get object_ids 1..n in that order.
PromptSet detections_to_prompts(const std::vector<Detection>& detections,
                                const BridgePolicy& policy, int frame_index);

// The empty_mask policy: an all-zero mask of the frame size. Errors when
// called with a nonempty prompt set.
BinaryMask resolve_empty(const PromptSet& prompt_set, int height, int width);

}  // namespace polyseg

#endif  // POLYSEG_PROMPT_BRIDGE_HPP_
