#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "posebench/ensemble.hpp"

namespace posebench {

using AnyModel = std::variant<ForestModel, BoostedModel, EnsembleModel>;

// Versioned self-describing JSON (`format_version`, `model_kind`, `params`,
// `labels`, `trees`). load(save(m)) predicts identically to m on all inputs.
std::string save_model(const AnyModel& model);
AnyModel load_model(std::string_view bytes);  // throws on unknown version / truncation

void save_model_file(const AnyModel& model, const std::string& path);
AnyModel load_model_file(const std::string& path);

std::vector<double> model_predict_proba(const AnyModel& model, std::span<const double> x);
const std::vector<std::string>& model_labels(const AnyModel& model);
std::string model_kind(const AnyModel& model);

}  // namespace posebench
