#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

// c x c count matrix; rows index truth, columns index prediction.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::int64_t> cells;  // row-major

  explicit ConfusionMatrix(std::vector<std::string> label_vocab = {})
      : labels(std::move(label_vocab)),
        cells(labels.size() * labels.size(), 0) {}

  int size() const { return static_cast<int>(labels.size()); }
  std::int64_t& at(int truth, int predicted) { return cells[truth * size() + predicted]; }
  std::int64_t at(int truth, int predicted) const { return cells[truth * size() + predicted]; }
  std::int64_t total() const;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsSummary {
  std::vector<ClassMetrics> per_class;  // aligned with confusion labels
  ClassMetrics macro;                   // unweighted class means
  double accuracy = 0.0;
};

// precision_j = M[j][j]/colsum_j, recall_j = M[j][j]/rowsum_j (0 when the
// denominator is 0), f1 = 2PR/(P+R) (0 when P+R = 0), accuracy = trace/total.
// Throws DataError on an all-zero matrix.
MetricsSummary compute_metrics(const ConfusionMatrix& confusion);

// Top-1 accuracy per hierarchy level, keyed "level1".."level3". Level 3
// compares leaf labels; levels 2 and 1 map both sides upward first.
// Throws DataError when a label is missing from the hierarchy.
std::map<std::string, double> hierarchy_rollup(std::span<const int> predictions,
                                               std::span<const int> truths,
                                               const std::vector<std::string>& labels,
                                               const Hierarchy& hierarchy);

// CSV export: header row of labels, one row per truth label.
std::string confusion_to_csv(const ConfusionMatrix& confusion);

}  // namespace posebench
