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

#include "polyseg/video.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace polyseg {
namespace {

// When a corrective detection overlaps an existing object at least this
// much, it re-prompts that object instead of allocating a new id.
constexpr double kReuseObjectIou = 0.25;

PromptSet prompts_at_frame(const std::vector<Frame>& frames, int frame_index,
                           const std::vector<BinaryMask>* gt_masks,
                           const DetectorSpec& detector,
                           const BridgePolicy& bridge,
                           AdapterClient* adapter) {
  const BinaryMask* gt =
      gt_masks != nullptr ? &(*gt_masks)[frame_index] : nullptr;
  try {
    const auto detections = detect(frames[frame_index], detector, gt, adapter);
    return detections_to_prompts(detections, bridge, frame_index);
  } catch (const BackendError& e) {
    throw BackendError("frame " + std::to_string(frame_index) + ": " +
                       e.what());
  }
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kPropagated:
      return "propagated";
    case Provenance::kEmptyNoPrompt:
      return "empty_no_prompt";
    case Provenance::kEmptyNoDetection:
      return "empty_no_detection";
  }
  return "unknown";
}

std::optional<int> select_prompt_frame(
    const std::vector<PromptSet>& per_frame_prompts,
    const VideoPolicy& policy) {
  if (policy.prompt_selection == PromptSelection::kFixedIndex) {
    if (policy.fixed_index < 0 ||
        policy.fixed_index >= static_cast<int>(per_frame_prompts.size())) {
      throw ContractError("select_prompt_frame: fixed index " +
                          std::to_string(policy.fixed_index) +
                          " outside sequence");
    }
    return policy.fixed_index;
  }
  for (std::size_t f = 0; f < per_frame_prompts.size(); ++f) {
    if (!per_frame_prompts[f].empty_flag) return static_cast<int>(f);
  }
  return std::nullopt;
}

BinaryMask merge_object_masks(const std::vector<BinaryMask>& masks, int height,
                              int width) {
  BinaryMask merged(height, width);
  for (const BinaryMask& m : masks) {
    merged = mask_or(merged, m);
  }
  return merged;
}

SequenceRun run_sequence(const std::string& sequence_id,
                         const std::vector<Frame>& frames,
                         const std::vector<BinaryMask>* gt_masks,
                         const DetectorSpec& detector,
                         const BridgePolicy& bridge, const VideoPolicy& policy,
                         SegmenterKind backend, AdapterClient* adapter) {
  if (frames.empty()) {
    throw ContractError("run_sequence: empty sequence");
  }
  const int n = static_cast<int>(frames.size());
  const int height = frames[0].height;
  const int width = frames[0].width;

  SequenceRun run;
  run.sequence_id = sequence_id;
  run.masks.assign(n, BinaryMask(height, width));
  run.provenance.assign(n, Provenance::kEmptyNoDetection);

  // Prompt-frame search.
  std::optional<int> prompt_frame;
  PromptSet prompt_set;
  if (policy.prompt_selection == PromptSelection::kFixedIndex) {
    if (policy.fixed_index < 0 || policy.fixed_index >= n) {
      throw ContractError("run_sequence: fixed prompt index " +
                          std::to_string(policy.fixed_index) +
                          " outside sequence of " + std::to_string(n) +
                          " frames");
    }
    prompt_frame = policy.fixed_index;
    prompt_set = prompts_at_frame(frames, policy.fixed_index, gt_masks,
                                  detector, bridge, adapter);
  } else {
    for (int f = 0; f < n; ++f) {
      PromptSet ps =
          prompts_at_frame(frames, f, gt_masks, detector, bridge, adapter);
      if (!ps.empty_flag) {
        prompt_frame = f;
        prompt_set = std::move(ps);
        break;
      }
    }
  }

  run.prompt_frame = prompt_frame;
  if (!prompt_frame.has_value()) {
    return run;  // all zeros, kEmptyNoDetection
  }
  if (prompt_set.empty_flag) {
    // Fixed prompt frame without a surviving detection: nothing to prompt.
    run.provenance.assign(n, Provenance::kEmptyNoPrompt);
    return run;
  }

  const int pf = *prompt_frame;
  if (policy.re_detect_interval > 0 && backend == SegmenterKind::kExternal) {
    throw ContractError(
        "run_sequence: re-detection is only supported with mock backends");
  }

  SegmenterSession session =
      open_session(sequence_id, frames, backend, policy.direction, adapter);
  for (const PromptEntry& entry : prompt_set.entries) {
    add_box_prompt(session, pf, entry.object_id,
                   expand_and_clip(entry.box, policy.prompt_expand, width,
                                   height));
  }

  const auto mark_covered = [&](int f, BinaryMask mask) {
    run.masks[f] = std::move(mask);
    run.provenance[f] = Provenance::kPropagated;
  };
  const auto mark_uncovered = [&](int f) {
    run.provenance[f] = Provenance::kEmptyNoPrompt;
  };

  if (policy.re_detect_interval == 0) {
    std::vector<std::vector<BinaryMask>> per_frame(n);
    try {
      propagate(session, gt_masks, [&](MaskEvent event) {
        per_frame[event.frame_index].push_back(std::move(event.mask));
      });
    } catch (const BackendError& e) {
      throw BackendError("sequence " + sequence_id + ": " + e.what());
    }
    const auto [begin, end] = session.coverage();
    for (int f = 0; f < n; ++f) {
      if (f >= begin && f < end) {
        mark_covered(f, merge_object_masks(per_frame[f], height, width));
      } else {
        mark_uncovered(f);
      }
    }
    run.prompts_issued = static_cast<int>(session.prompts().size());
    return run;
  }

  // Re-detection pass (mock backends): walk covered frames in order and add
  // corrective prompts every K frames when detections drift off the current
  // propagated mask.
  const int k = policy.re_detect_interval;
  std::set<int> object_ids;
  int next_object_id = 0;
  for (const auto& p : session.prompts()) {
    object_ids.insert(p.object_id);
    next_object_id = std::max(next_object_id, p.object_id);
  }
  ++next_object_id;

  const auto object_mask_at = [&](int object_id, int f) -> BinaryMask {
    const PromptRecord* prompt = governing_prompt(session, object_id, f);
    if (prompt == nullptr) return BinaryMask(height, width);
    const BinaryMask* gt = gt_masks != nullptr ? &(*gt_masks)[f] : nullptr;
    return propagated_object_mask(session, *prompt, f, gt);
  };
  const auto merged_at = [&](int f) {
    std::vector<BinaryMask> masks;
    for (int id : object_ids) masks.push_back(object_mask_at(id, f));
    return merge_object_masks(masks, height, width);
  };

  const auto [begin, end] = session.coverage();
  for (int f = 0; f < n; ++f) {
    if (f < begin || f >= end) {
      mark_uncovered(f);
      continue;
    }
    BinaryMask merged = merged_at(f);
    if (f > pf && (f - pf) % k == 0) {
      const PromptSet corrective =
          prompts_at_frame(frames, f, gt_masks, detector, bridge, adapter);
      const auto current_box = bbox_from_mask(merged);
      for (const PromptEntry& entry : corrective.entries) {
        const double drift_iou =
            current_box ? box_iou(entry.box, *current_box) : 0.0;
        if (drift_iou >= policy.re_prompt_iou) continue;

        int best_id = -1;
        double best_iou = 0.0;
        for (int id : object_ids) {
          const auto object_box = bbox_from_mask(object_mask_at(id, f));
          if (!object_box) continue;
          const double iou = box_iou(entry.box, *object_box);
          if (iou > best_iou) {
            best_iou = iou;
            best_id = id;
          }
        }
        const int target_id = best_iou >= kReuseObjectIou && best_id >= 0
                                  ? best_id
                                  : next_object_id++;
        object_ids.insert(target_id);

        bool already = false;
        for (const auto& p : session.prompts()) {
          if (p.frame_index == f && p.object_id == target_id) {
            already = true;
            break;
          }
        }
        if (!already) {
          add_box_prompt(session, f, target_id,
                         expand_and_clip(entry.box, policy.prompt_expand,
                                         width, height));
          merged = merged_at(f);
        }
      }
    }
    mark_covered(f, std::move(merged));
  }
  run.prompts_issued = static_cast<int>(session.prompts().size());
  return run;
}

}  // namespace polyseg
