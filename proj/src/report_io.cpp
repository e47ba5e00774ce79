#include "posebench/report_io.hpp"

#include <cstdio>

#include "posebench/errors.hpp"
#include "posebench/version.hpp"

namespace posebench {

using nlohmann::json;

json report_to_json(const EvalReport& report, const json& run_config) {
  json doc;
  doc["version"] = kVersion;
  doc["strategy"] = report.strategy;
  json params{{"folds", report.n_folds},
              {"seed", report.seed},
              {"train_fraction", report.train_fraction},
              {"aggregate", report.per_fold_average ? "per_fold_mean" : "pooled"}};
  if (report.k > 0) params["k"] = report.k;
  if (report.n_train_cameras > 0) params["train_cameras"] = report.n_train_cameras;
  doc["params"] = std::move(params);

  json violations = json::array();
  for (const auto& v : report.leakage.violations)
    violations.push_back(
        json{{"fold", v.fold}, {"video_id", v.video_id}, {"group_key", v.group_key}});
  doc["leakage"] = json{{"leaky", report.leakage.leaky}, {"violations", std::move(violations)}};

  doc["labels"] = report.confusion.labels;
  doc["accuracy"] = report.metrics.accuracy;
  doc["macro"] = json{{"precision", report.metrics.macro.precision},
                      {"recall", report.metrics.macro.recall},
                      {"f1", report.metrics.macro.f1}};
  json per_class = json::object();
  for (std::size_t j = 0; j < report.confusion.labels.size(); ++j) {
    const ClassMetrics& m = report.metrics.per_class[j];
    per_class[report.confusion.labels[j]] =
        json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  }
  doc["per_class"] = std::move(per_class);
  if (!report.per_level_accuracy.empty()) doc["per_level_accuracy"] = report.per_level_accuracy;

  json confusion = json::array();
  for (int t = 0; t < report.confusion.size(); ++t) {
    json row = json::array();
    for (int p = 0; p < report.confusion.size(); ++p) row.push_back(report.confusion.at(t, p));
    confusion.push_back(std::move(row));
  }
  doc["confusion"] = std::move(confusion);
  doc["warnings"] = report.warnings;
  if (!run_config.is_null()) doc["run_config"] = run_config;
  return doc;
}

namespace {

std::string pct(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%7.2f%%", v * 100.0);
  return buf;
}

std::string render_text(const json& doc) {
  std::string out;
  out += "Cross-validation report (strategy: " + doc.value("strategy", std::string("?"));
  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (p.contains("k")) out += ", folds: " + std::to_string(p["k"].get<int>());
    if (p.contains("train_cameras"))
      out += ", train cameras: " + std::to_string(p["train_cameras"].get<int>());
    if (p.contains("seed")) out += ", seed: " + std::to_string(p["seed"].get<std::uint64_t>());
  }
  out += ")\n";

  bool leaky = doc.contains("leakage") && doc["leakage"].value("leaky", false);
  if (leaky) {
    auto n = doc["leakage"]["violations"].size();
    out += "WARNING: target leakage detected: frames from the same video land in both "
           "train and test (" +
           std::to_string(n) +
           " fold-video overlap(s)); scores below overstate generalization\n";
  } else {
    out += "Leakage check: clean (no video spans train and test)\n";
  }

  std::size_t width = 5;
  for (const auto& label : doc.at("labels"))
    width = std::max(width, label.get<std::string>().size());

  char line[256];
  std::snprintf(line, sizeof(line), " %3s  %-*s  %9s  %9s  %9s\n", "ID",
                static_cast<int>(width), "Class", "Precision", "Recall", "F1 Score");
  out += line;
  int id = 0;
  for (const auto& label : doc.at("labels")) {
    const std::string name = label.get<std::string>();
    const json& m = doc.at("per_class").at(name);
    std::snprintf(line, sizeof(line), " %3d  %-*s  %9s  %9s  %9s\n", id++,
                  static_cast<int>(width), name.c_str(),
                  pct(m.at("precision").get<double>()).c_str(),
                  pct(m.at("recall").get<double>()).c_str(),
                  pct(m.at("f1").get<double>()).c_str());
    out += line;
  }
  const json& macro = doc.at("macro");
  std::snprintf(line, sizeof(line), " %3s  %-*s  %9s  %9s  %9s\n", "", static_cast<int>(width),
                "Average", pct(macro.at("precision").get<double>()).c_str(),
                pct(macro.at("recall").get<double>()).c_str(),
                pct(macro.at("f1").get<double>()).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "Accuracy: %.2f%%\n",
                doc.at("accuracy").get<double>() * 100.0);
  out += line;
  if (doc.contains("per_level_accuracy")) {
    out += "Hierarchy top-1 accuracy:";
    for (const auto& [level, acc] : doc["per_level_accuracy"].items()) {
      std::snprintf(line, sizeof(line), "  %s %.2f%%", level.c_str(), acc.get<double>() * 100.0);
      out += line;
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_report_text(const json& doc) {
  if (!doc.is_object() || !doc.contains("per_class") || !doc.contains("labels"))
    throw DataError("report document lacks per_class metrics");
  try {
    return render_text(doc);
  } catch (const json::exception& e) {
    throw DataError("malformed report document: " + std::string(e.what()));
  }
}

}  // namespace posebench
