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

#include "polyseg/prompt_bridge.hpp"

#include <algorithm>

namespace polyseg {

std::vector<Detection> nms(std::vector<Detection> detections,
                           double iou_threshold) {
  std::sort(detections.begin(), detections.end(), detection_less);
  std::vector<Detection> kept;
  for (const Detection& d : detections) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (box_iou(d.box, k.box) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

PromptSet detections_to_prompts(const std::vector<Detection>& detections,
                                const BridgePolicy& policy, int frame_index) {
  std::vector<Detection> filtered;
  for (const Detection& d : detections) {
    if (d.confidence >= policy.conf_threshold) filtered.push_back(d);
  }
  std::vector<Detection> kept = nms(std::move(filtered), policy.nms_iou);
  if (static_cast<int>(kept.size()) > policy.max_prompts) {
    kept.resize(policy.max_prompts);
  }

  PromptSet out;
  out.frame_index = frame_index;
  out.entries.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.entries.push_back(PromptEntry{static_cast<int>(i) + 1, kept[i].box});
  }
  out.empty_flag = out.entries.empty();
  return out;
}

BinaryMask resolve_empty(const PromptSet& prompt_set, int height, int width) {
  if (!prompt_set.empty_flag) {
    throw ContractError("resolve_empty: prompt set is not empty");
  }
  return BinaryMask(height, width);
}

}  // namespace polyseg
