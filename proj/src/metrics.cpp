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

#include "polyseg/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace polyseg {
namespace {

constexpr std::array<double FrameMetrics::*, 9> kMetricFields = {
    &FrameMetrics::iou,     &FrameMetrics::dice,     &FrameMetrics::precision,
    &FrameMetrics::recall,  &FrameMetrics::f2,       &FrameMetrics::sen,
    &FrameMetrics::s_alpha, &FrameMetrics::e_phi_mn, &FrameMetrics::f_beta_mn};

void check_shape(const SoftMask& pred, const BinaryMask& gt,
                 const char* what) {
  if (!pred.same_shape(gt)) {
    throw DimensionMismatch(std::string(what) + ": shapes differ");
  }
}

void check_shape(const BinaryMask& pred, const BinaryMask& gt,
                 const char* what) {
  if (!pred.same_shape(gt)) {
    throw DimensionMismatch(std::string(what) + ": shapes differ");
  }
}

double mean_of(const SoftMask& m) {
  double s = 0;
  for (double v : m.values) s += v;
  return s / static_cast<double>(m.values.size());
}

// Object-level similarity of one region: 2x / (x^2 + 1 + sigma_x + eps)
// where x and sigma_x are the mean and sample standard deviation of the
// prediction over that region.
double object_score(const std::vector<double>& region, double eps) {
  if (region.empty()) return 0.0;
  double sum = 0;
  for (double v : region) sum += v;
  const double x = sum / static_cast<double>(region.size());
  double sq = 0;
  for (double v : region) sq += (v - x) * (v - x);
  const double sigma =
      region.size() > 1 ? std::sqrt(sq / (static_cast<double>(region.size()) - 1.0))
                        : 0.0;
  return 2.0 * x / (x * x + 1.0 + sigma + eps);
}

double s_object(const SoftMask& pred, const BinaryMask& gt, double eps) {
  std::vector<double> fg, bg;
  fg.reserve(pred.values.size());
  bg.reserve(pred.values.size());
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    if (gt.values[i]) {
      fg.push_back(pred.values[i]);
    } else {
      bg.push_back(1.0 - pred.values[i]);
    }
  }
  const double mu = static_cast<double>(fg.size()) /
                    static_cast<double>(pred.values.size());
  return mu * object_score(fg, eps) + (1.0 - mu) * object_score(bg, eps);
}

// Region-aware block similarity (the classic image-quality Q index with
// (N-1)-normalized moments).
double block_ssim(const SoftMask& pred, const BinaryMask& gt, int y0, int y1,
                  int x0, int x1, double eps) {
  const double n = static_cast<double>(y1 - y0) * (x1 - x0);
  double sp = 0, sg = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      sp += pred.values[static_cast<std::size_t>(y) * pred.width + x];
      sg += gt.at(y, x);
    }
  }
  const double mp = sp / n;
  const double mg = sg / n;
  double vp = 0, vg = 0, cov = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const double dp =
          pred.values[static_cast<std::size_t>(y) * pred.width + x] - mp;
      const double dg = gt.at(y, x) - mg;
      vp += dp * dp;
      vg += dg * dg;
      cov += dp * dg;
    }
  }
  vp /= n - 1.0 + eps;
  vg /= n - 1.0 + eps;
  cov /= n - 1.0 + eps;
  const double a = 4.0 * mp * mg * cov;
  const double b = (mp * mp + mg * mg) * (vp + vg);
  if (a != 0.0) return a / (b + eps);
  return b == 0.0 ? 1.0 : 0.0;
}

double s_region(const SoftMask& pred, const BinaryMask& gt, double eps) {
  // Foreground centroid of the ground truth, in 1-based coordinates with
  // round-half-away-from-zero, matching the published construction.
  const long long total = gt.foreground_count();
  double sx = 0, sy = 0;
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      if (gt.at(y, x)) {
        sx += x + 1;
        sy += y + 1;
      }
    }
  }
  const int cx = static_cast<int>(
      std::llround(sx / static_cast<double>(total)));
  const int cy = static_cast<int>(
      std::llround(sy / static_cast<double>(total)));

  const double area = static_cast<double>(gt.height) * gt.width;
  const int ys[3] = {0, cy, gt.height};
  const int xs[3] = {0, cx, gt.width};
  double q = 0;
  for (int by = 0; by < 2; ++by) {
    for (int bx = 0; bx < 2; ++bx) {
      const int y0 = ys[by], y1 = ys[by + 1];
      const int x0 = xs[bx], x1 = xs[bx + 1];
      const double block_area = static_cast<double>(y1 - y0) * (x1 - x0);
      if (block_area <= 0) continue;  // centroid on the border, weight 0
      q += block_area / area * block_ssim(pred, gt, y0, y1, x0, x1, eps);
    }
  }
  return q;
}

// Single-threshold enhanced-alignment measure of a binarized prediction.
double alignment_e(const BinaryMask& pred, const BinaryMask& gt, double eps) {
  const double n = static_cast<double>(pred.values.size());
  const long long gt_fg = gt.foreground_count();
  const double pred_mean = static_cast<double>(pred.foreground_count()) / n;
  if (gt_fg == 0) return 1.0 - pred_mean;
  if (gt_fg == static_cast<long long>(pred.values.size())) return pred_mean;

  const double gt_mean = static_cast<double>(gt_fg) / n;
  double sum = 0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double phi_p = pred.values[i] - pred_mean;
    const double phi_g = gt.values[i] - gt_mean;
    const double xi =
        2.0 * phi_p * phi_g / (phi_p * phi_p + phi_g * phi_g + eps);
    sum += (1.0 + xi) * (1.0 + xi) / 4.0;
  }
  return sum / n;
}

double f_of_counts(const ConfusionCounts& c, double beta_sq) {
  return std::get<2>(precision_recall_f(c, beta_sq));
}

}  // namespace

SoftMask::SoftMask(int h, int w) : height(h), width(w) {
  if (h <= 0 || w <= 0) {
    throw ContractError("soft mask dimensions must be positive");
  }
  values.assign(static_cast<std::size_t>(h) * w, 0.0);
}

SoftMask SoftMask::from_binary(const BinaryMask& mask) {
  SoftMask out(mask.height, mask.width);
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    out.values[i] = mask.values[i] ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> sweep_thresholds(int count) {
  if (count < 1) throw ContractError("threshold count must be >= 1");
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    out[k] = (k + 0.5) / static_cast<double>(count);
  }
  return out;
}

BinaryMask binarize(const SoftMask& pred, double threshold) {
  BinaryMask out(pred.height, pred.width);
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    out.values[i] = pred.values[i] >= threshold ? 1 : 0;
  }
  return out;
}

std::pair<double, double> iou_dice(const ConfusionCounts& c) {
  const double denom = static_cast<double>(c.tp + c.fp + c.fn);
  if (denom == 0.0) return {1.0, 1.0};  // both empty
  const double tp = static_cast<double>(c.tp);
  return {tp / denom, 2.0 * tp / (denom + tp)};
}

std::pair<double, double> iou_dice(const BinaryMask& pred,
                                   const BinaryMask& gt) {
  check_shape(pred, gt, "iou_dice");
  return iou_dice(mask_confusion(pred, gt));
}

std::tuple<double, double, double> precision_recall_f(
    const ConfusionCounts& c, double beta_sq) {
  if (c.tp + c.fp + c.fn == 0) return {1.0, 1.0, 1.0};  // both empty
  const double tp = static_cast<double>(c.tp);
  const double precision = c.tp + c.fp > 0 ? tp / (c.tp + c.fp) : 0.0;
  const double recall = c.tp + c.fn > 0 ? tp / (c.tp + c.fn) : 0.0;
  const double denom = beta_sq * precision + recall;
  const double f =
      denom > 0.0 ? (1.0 + beta_sq) * precision * recall / denom : 0.0;
  return {precision, recall, f};
}

std::tuple<double, double, double> precision_recall_f(const BinaryMask& pred,
                                                      const BinaryMask& gt,
                                                      double beta_sq) {
  check_shape(pred, gt, "precision_recall_f");
  return precision_recall_f(mask_confusion(pred, gt), beta_sq);
}

double s_measure(const SoftMask& pred, const BinaryMask& gt,
                 const MetricConfig& config) {
  check_shape(pred, gt, "s_measure");
  const long long gt_fg = gt.foreground_count();
  double s;
  if (gt_fg == 0) {
    s = 1.0 - mean_of(pred);
  } else if (gt_fg == static_cast<long long>(gt.values.size())) {
    s = mean_of(pred);
  } else {
    s = config.alpha * s_object(pred, gt, config.epsilon) +
        (1.0 - config.alpha) * s_region(pred, gt, config.epsilon);
  }
  return std::clamp(s, 0.0, 1.0);
}

double s_measure(const BinaryMask& pred, const BinaryMask& gt,
                 const MetricConfig& config) {
  return s_measure(SoftMask::from_binary(pred), gt, config);
}

double e_measure_mean(const SoftMask& pred, const BinaryMask& gt,
                      const MetricConfig& config) {
  check_shape(pred, gt, "e_measure_mean");
  double sum = 0;
  const auto thresholds = sweep_thresholds(config.thresholds);
  for (double t : thresholds) {
    sum += alignment_e(binarize(pred, t), gt, config.epsilon);
  }
  return sum / static_cast<double>(thresholds.size());
}

double e_measure_mean(const BinaryMask& pred, const BinaryMask& gt,
                      const MetricConfig& config) {
  check_shape(pred, gt, "e_measure_mean");
  // Every threshold in (0,1) binarizes a binary map to itself.
  return alignment_e(pred, gt, config.epsilon);
}

double f_measure_mean(const SoftMask& pred, const BinaryMask& gt,
                      const MetricConfig& config) {
  check_shape(pred, gt, "f_measure_mean");
  double sum = 0;
  const auto thresholds = sweep_thresholds(config.thresholds);
  for (double t : thresholds) {
    sum += f_of_counts(mask_confusion(binarize(pred, t), gt), config.beta_sq);
  }
  return sum / static_cast<double>(thresholds.size());
}

double f_measure_mean(const BinaryMask& pred, const BinaryMask& gt,
                      const MetricConfig& config) {
  check_shape(pred, gt, "f_measure_mean");
  return f_of_counts(mask_confusion(pred, gt), config.beta_sq);
}

FrameMetrics compute_frame_metrics(const BinaryMask& pred,
                                   const BinaryMask& gt,
                                   const MetricConfig& config) {
  check_shape(pred, gt, "compute_frame_metrics");
  const ConfusionCounts counts = mask_confusion(pred, gt);
  FrameMetrics m;
  std::tie(m.iou, m.dice) = iou_dice(counts);
  std::tie(m.precision, m.recall, m.f2) = precision_recall_f(counts, 4.0);
  m.sen = m.recall;
  m.s_alpha = s_measure(pred, gt, config);
  m.e_phi_mn = e_measure_mean(pred, gt, config);
  m.f_beta_mn = f_of_counts(counts, config.beta_sq);
  return m;
}

DatasetReport aggregate(const std::vector<SampleMetrics>& samples,
                        Grouping grouping) {
  if (samples.empty()) {
    throw ContractError("aggregate: no samples");
  }
  DatasetReport report;
  report.grouping = grouping;
  report.sample_count = samples.size();
  report.samples = samples;

  if (grouping == Grouping::kFlat) {
    for (const auto& s : samples) {
      for (auto field : kMetricFields) {
        report.means.*field += s.metrics.*field;
      }
    }
    for (auto field : kMetricFields) {
      report.means.*field /= static_cast<double>(samples.size());
    }
    std::map<std::string, int> seqs;
    for (const auto& s : samples) {
      if (!s.sequence_id.empty()) seqs[s.sequence_id] = 1;
    }
    report.sequence_count = seqs.size();
    return report;
  }

  // Per-sequence means first, then the unweighted mean across sequences.
  std::map<std::string, std::pair<FrameMetrics, std::size_t>> groups;
  for (const auto& s : samples) {
    auto& [sums, n] = groups[s.sequence_id];
    for (auto field : kMetricFields) {
      sums.*field += s.metrics.*field;
    }
    ++n;
  }
  for (auto& [id, entry] : groups) {
    for (auto field : kMetricFields) {
      entry.first.*field /= static_cast<double>(entry.second);
    }
    for (auto field : kMetricFields) {
      report.means.*field += entry.first.*field;
    }
  }
  for (auto field : kMetricFields) {
    report.means.*field /= static_cast<double>(groups.size());
  }
  report.sequence_count = groups.size();
  return report;
}

}  // namespace polyseg
