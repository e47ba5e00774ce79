#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

// Column-major training matrix plus integer class labels. The label
// vocabulary always spans the full dataset, so per-fold subsets keep
// probability vectors aligned even when a class is absent from the fold.
struct TrainingSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> columns;       // columns[f * n + i]
  std::vector<std::int32_t> y;       // label index per sample
  std::vector<std::string> labels;   // class names

  double at(std::size_t i, std::size_t f) const { return columns[f * n + i]; }
  const double* column(std::size_t f) const { return columns.data() + f * n; }
  int n_classes() const { return static_cast<int>(labels.size()); }

  static TrainingSet from_rows(const std::vector<std::vector<double>>& rows,
                               const std::vector<int>& y,
                               std::vector<std::string> labels = {});
};

TrainingSet training_set_from_dataset(const Dataset& dataset);
TrainingSet training_set_from_dataset(const Dataset& dataset,
                                      std::span<const std::int32_t> rows);

}  // namespace posebench
