#include "posebench/metrics.hpp"

#include "posebench/errors.hpp"

namespace posebench {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (auto v : cells) t += v;
  return t;
}

MetricsSummary compute_metrics(const ConfusionMatrix& confusion) {
  const int c = confusion.size();
  for (auto v : confusion.cells)
    if (v < 0) throw DataError("confusion matrix holds a negative count");
  const std::int64_t total = confusion.total();
  if (total == 0) throw DataError("confusion matrix is all zero");

  MetricsSummary summary;
  summary.per_class.resize(c);
  std::int64_t trace = 0;
  for (int j = 0; j < c; ++j) {
    std::int64_t rowsum = 0, colsum = 0;
    for (int k = 0; k < c; ++k) {
      rowsum += confusion.at(j, k);
      colsum += confusion.at(k, j);
    }
    const std::int64_t tp = confusion.at(j, j);
    trace += tp;
    ClassMetrics& m = summary.per_class[j];
    m.precision = colsum > 0 ? static_cast<double>(tp) / static_cast<double>(colsum) : 0.0;
    m.recall = rowsum > 0 ? static_cast<double>(tp) / static_cast<double>(rowsum) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    summary.macro.precision += m.precision;
    summary.macro.recall += m.recall;
    summary.macro.f1 += m.f1;
  }
  summary.macro.precision /= c;
  summary.macro.recall /= c;
  summary.macro.f1 /= c;
  summary.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  return summary;
}

std::map<std::string, double> hierarchy_rollup(std::span<const int> predictions,
                                               std::span<const int> truths,
                                               const std::vector<std::string>& labels,
                                               const Hierarchy& hierarchy) {
  if (predictions.size() != truths.size())
    throw DataError("hierarchy_rollup: prediction/truth length mismatch");
  if (predictions.empty()) throw DataError("hierarchy_rollup: no samples");

  // Per-label upward mapping resolved once. The hierarchy must be a tree:
  // a level-2 group name determines its level-1 parent.
  std::vector<const std::array<std::string, 2>*> up(labels.size());
  std::map<std::string, std::string> level2_parent;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = hierarchy.up.find(labels[i]);
    if (it == hierarchy.up.end())
      throw DataError("label '" + labels[i] + "' missing from hierarchy");
    up[i] = &it->second;
    auto [pos, inserted] = level2_parent.emplace(it->second[0], it->second[1]);
    if (!inserted && pos->second != it->second[1])
      throw DataError("hierarchy is not a tree: level-2 group '" + it->second[0] +
                      "' has two level-1 parents");
  }

  std::int64_t hit1 = 0, hit2 = 0, hit3 = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int p = predictions[i], t = truths[i];
    if (p < 0 || p >= static_cast<int>(labels.size()) || t < 0 ||
        t >= static_cast<int>(labels.size()))
      throw DataError("hierarchy_rollup: label index out of range");
    if (p == t) ++hit3;
    if ((*up[p])[0] == (*up[t])[0]) ++hit2;
    if ((*up[p])[1] == (*up[t])[1]) ++hit1;
  }
  const double n = static_cast<double>(predictions.size());
  return {{"level1", hit1 / n}, {"level2", hit2 / n}, {"level3", hit3 / n}};
}

std::string confusion_to_csv(const ConfusionMatrix& confusion) {
  std::string out = "truth";
  for (const auto& label : confusion.labels) out += "," + label;
  out += '\n';
  for (int t = 0; t < confusion.size(); ++t) {
    out += confusion.labels[t];
    for (int p = 0; p < confusion.size(); ++p)
      out += "," + std::to_string(confusion.at(t, p));
    out += '\n';
  }
  return out;
}

}  // namespace posebench
