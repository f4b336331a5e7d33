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

#ifndef POLYSEG_REPORT_HPP_
#define POLYSEG_REPORT_HPP_

#include <string>
#include <vector>

#include "polyseg/metrics.hpp"

namespace polyseg {

// One method-comparison table: methods x metric columns for one dataset.
struct ReportTable {
  std::string dataset;
  std::vector<std::string> columns;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> values;  // [method][column]
};

// Fixture file: {"tables":[{"dataset":..., "columns":[...],
// "rows":[{"method":..., "values":[...]}, ...]}, ...]}
std::vector<ReportTable> load_fixture_tables(const std::string& path);

// Concatenates rows of tables sharing a dataset name, keeping first-seen
// dataset order. Throws ConfigError naming the dataset and columns when
// column sets disagree.
std::vector<ReportTable> merge_tables(
    const std::vector<std::vector<ReportTable>>& sources);

// Builds a one-row table for `dataset` from aggregated means, mapping
// column names like "mIoU", "Dice", "Sen", "F2", "S_alpha", "E_phi_mn",
// "F_beta_mn" onto the metric vector.
ReportTable table_from_means(const std::string& dataset,
                             const std::vector<std::string>& columns,
                             const std::string& method,
                             const FrameMetrics& means);

// best[row][col] marks every cell holding its column's maximum (ties all
// marked).
std::vector<std::vector<bool>> best_flags(const ReportTable& table);

// Paper-style rendering: markdown bolds each column's best value.
std::string to_markdown(const ReportTable& table);
std::string to_csv(const ReportTable& table);

}  // namespace polyseg

#endif  // POLYSEG_REPORT_HPP_
