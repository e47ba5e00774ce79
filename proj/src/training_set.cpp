#include "posebench/training_set.hpp"

#include <algorithm>

#include "posebench/errors.hpp"

namespace posebench {

TrainingSet TrainingSet::from_rows(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& y,
                                   std::vector<std::string> labels) {
  if (rows.size() != y.size()) throw DataError("TrainingSet: rows/labels size mismatch");
  TrainingSet ts;
  ts.n = rows.size();
  ts.d = rows.empty() ? 0 : rows[0].size();
  ts.columns.resize(ts.n * ts.d);
  for (std::size_t i = 0; i < ts.n; ++i) {
    if (rows[i].size() != ts.d) throw DataError("TrainingSet: ragged feature rows");
    for (std::size_t f = 0; f < ts.d; ++f) ts.columns[f * ts.n + i] = rows[i][f];
  }
  ts.y.assign(y.begin(), y.end());
  if (labels.empty()) {
    int max_label = -1;
    for (int v : y) max_label = std::max(max_label, v);
    for (int c = 0; c <= max_label; ++c) labels.push_back("class_" + std::to_string(c));
  }
  ts.labels = std::move(labels);
  for (int v : ts.y)
    if (v < 0 || v >= ts.n_classes()) throw DataError("TrainingSet: label index out of range");
  return ts;
}

TrainingSet training_set_from_dataset(const Dataset& dataset) {
  std::vector<std::int32_t> rows(dataset.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::int32_t>(i);
  return training_set_from_dataset(dataset, rows);
}

TrainingSet training_set_from_dataset(const Dataset& dataset,
                                      std::span<const std::int32_t> rows) {
  if (!dataset.has_features())
    throw DataError("training set requires a featurized dataset");
  TrainingSet ts;
  ts.n = rows.size();
  ts.d = kFeatureDim;
  ts.labels = dataset.labels;
  ts.columns.resize(ts.n * ts.d);
  ts.y.resize(ts.n);
  for (std::size_t i = 0; i < ts.n; ++i) {
    const auto row = static_cast<std::size_t>(rows[i]);
    if (row >= dataset.size()) throw DataError("training set row index out of range");
    const FeatureVector& fv = dataset.features[row];
    for (std::size_t f = 0; f < ts.d; ++f) ts.columns[f * ts.n + i] = fv[f];
    int label = dataset.label_index(dataset.meta[row].label);
    if (label < 0) throw DataError("sample label missing from vocabulary");
    ts.y[i] = label;
  }
  return ts;
}

}  // namespace posebench
