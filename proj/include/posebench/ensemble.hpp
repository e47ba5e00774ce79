#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "posebench/forest.hpp"
#include "posebench/gbt.hpp"

namespace posebench {

using EnsembleMemberModel = std::variant<ForestModel, BoostedModel>;

struct EnsembleMember {
  EnsembleMemberModel model;
  double weight = 1.0;
};

// Weighted soft-voting combination of trained members sharing one label
// vocabulary and feature dimension.
struct EnsembleModel {
  std::vector<EnsembleMember> members;
  std::vector<std::string> labels;
  std::int32_t n_features = 0;
};

// Validates member compatibility (same labels and feature dimension,
// nonnegative weights, not all zero). Throws DataError otherwise.
EnsembleModel make_ensemble(std::vector<EnsembleMember> members);

// Weighted mean of member probability vectors, renormalized.
std::vector<double> ensemble_predict_proba(const EnsembleModel& model,
                                           std::span<const double> x);

}  // namespace posebench
