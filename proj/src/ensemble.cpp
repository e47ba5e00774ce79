#include "posebench/ensemble.hpp"

#include "posebench/errors.hpp"

namespace posebench {

namespace {

const std::vector<std::string>& member_labels(const EnsembleMemberModel& m) {
  return std::visit([](const auto& model) -> const std::vector<std::string>& {
    return model.labels;
  }, m);
}

std::int32_t member_features(const EnsembleMemberModel& m) {
  return std::visit([](const auto& model) { return model.n_features; }, m);
}

std::vector<double> member_proba(const EnsembleMemberModel& m, std::span<const double> x) {
  if (std::holds_alternative<ForestModel>(m))
    return forest_predict_proba(std::get<ForestModel>(m), x);
  return gbt_predict_proba(std::get<BoostedModel>(m), x);
}

}  // namespace

EnsembleModel make_ensemble(std::vector<EnsembleMember> members) {
  if (members.empty()) throw DataError("ensemble requires at least one member");
  double total_weight = 0.0;
  for (const auto& member : members) {
    if (member.weight < 0.0) throw DataError("ensemble weights must be >= 0");
    total_weight += member.weight;
  }
  if (!(total_weight > 0.0)) throw DataError("ensemble weights must not all be zero");

  EnsembleModel model;
  model.labels = member_labels(members[0].model);
  model.n_features = member_features(members[0].model);
  for (const auto& member : members) {
    if (member_labels(member.model) != model.labels)
      throw DataError("ensemble members were trained on different label vocabularies");
    if (member_features(member.model) != model.n_features)
      throw DataError("ensemble members expect different feature dimensions");
  }
  model.members = std::move(members);
  return model;
}

std::vector<double> ensemble_predict_proba(const EnsembleModel& model,
                                           std::span<const double> x) {
  if (model.members.empty()) throw DataError("ensemble has no members");
  std::vector<double> acc(model.labels.size(), 0.0);
  double total_weight = 0.0;
  for (const auto& member : model.members) {
    if (member.weight == 0.0) continue;
    std::vector<double> p = member_proba(member.model, x);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += member.weight * p[j];
    total_weight += member.weight;
  }
  double sum = 0.0;
  for (double& v : acc) {
    v /= total_weight;
    sum += v;
  }
  if (sum > 0.0)
    for (double& v : acc) v /= sum;
  return acc;
}

}  // namespace posebench
