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

#ifndef POLYSEG_METRICS_HPP_
#define POLYSEG_METRICS_HPP_

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "polyseg/core.hpp"

namespace polyseg {

struct MetricConfig {
  double alpha = 0.5;     // structure-measure mixing weight
  double beta_sq = 0.3;   // beta^2 of the mean F-measure
  int thresholds = 256;   // binarization count for mean-measure sweeps
  double epsilon = 1e-8;  // denominator guard
};

// The per-frame metric vector. `sen` always equals `recall`; `f2` is the
// recall-weighted F-measure with beta^2 = 4.
struct FrameMetrics {
  double iou = 0;
  double dice = 0;
  double precision = 0;
  double recall = 0;
  double f2 = 0;
  double sen = 0;
  double s_alpha = 0;
  double e_phi_mn = 0;
  double f_beta_mn = 0;
};

// Prediction map with values in [0,1]; used only by the threshold-sweep
// measures (the pipeline itself always produces binary masks).
struct SoftMask {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  SoftMask() = default;
  SoftMask(int h, int w);
  static SoftMask from_binary(const BinaryMask& mask);
  bool same_shape(const BinaryMask& other) const {
    return height == other.height && width == other.width;
  }
};

// Midpoint binarization thresholds (k + 0.5)/count, all strictly inside
// (0,1) so a binary prediction binarizes identically at every threshold.
std::vector<double> sweep_thresholds(int count);
BinaryMask binarize(const SoftMask& pred, double threshold);  // pred >= t

// Overlap ratios from confusion counts; both-empty pairs score 1.0 by
// convention (a correct all-negative frame must not be penalized).
std::pair<double, double> iou_dice(const ConfusionCounts& counts);
std::pair<double, double> iou_dice(const BinaryMask& pred,
                                   const BinaryMask& gt);

// precision = tp/(tp+fp), recall = tp/(tp+fn),
// f = (1+b2)*P*R/(b2*P+R); zero denominators score 0 except both-empty.
std::tuple<double, double, double> precision_recall_f(
    const ConfusionCounts& counts, double beta_sq);
std::tuple<double, double, double> precision_recall_f(const BinaryMask& pred,
                                                      const BinaryMask& gt,
                                                      double beta_sq);

// Structure-measure S = alpha*S_object + (1-alpha)*S_region.
// Uniform ground truth short-circuits: all-background -> 1 - mean(pred),
// all-foreground -> mean(pred). Result clamped to [0,1].
double s_measure(const SoftMask& pred, const BinaryMask& gt,
                 const MetricConfig& config = {});
double s_measure(const BinaryMask& pred, const BinaryMask& gt,
                 const MetricConfig& config = {});

// Mean enhanced-alignment measure. Per binarization: bias-align both maps
// (phi = X - mean(X)), xi = 2*phi_p*phi_g / (phi_p^2 + phi_g^2 + eps),
// E = mean((1+xi)^2/4). Uniform gt: empty -> 1 - mean(pred),
// full -> mean(pred). Soft predictions average E over the sweep.
double e_measure_mean(const SoftMask& pred, const BinaryMask& gt,
                      const MetricConfig& config = {});
double e_measure_mean(const BinaryMask& pred, const BinaryMask& gt,
                      const MetricConfig& config = {});

// Mean F-measure over the binarization sweep with beta^2 = config.beta_sq.
double f_measure_mean(const SoftMask& pred, const BinaryMask& gt,
                      const MetricConfig& config = {});
double f_measure_mean(const BinaryMask& pred, const BinaryMask& gt,
                      const MetricConfig& config = {});

// All per-frame metrics of a binary prediction in one pass.
FrameMetrics compute_frame_metrics(const BinaryMask& pred,
                                   const BinaryMask& gt,
                                   const MetricConfig& config = {});

struct SampleMetrics {
  std::string sample_id;
  std::string sequence_id;  // empty for image datasets
  FrameMetrics metrics;
};

enum class Grouping { kFlat, kBySequence };

struct DatasetReport {
  Grouping grouping = Grouping::kFlat;
  std::size_t sample_count = 0;
  std::size_t sequence_count = 0;
  FrameMetrics means{};
  std::vector<SampleMetrics> samples;
};

// Flat: arithmetic mean per metric. BySequence: mean within each sequence,
// then the unweighted mean across sequences. Throws ContractError on empty
// input.
DatasetReport aggregate(const std::vector<SampleMetrics>& samples,
                        Grouping grouping);

}  // namespace polyseg

#endif  // POLYSEG_METRICS_HPP_
