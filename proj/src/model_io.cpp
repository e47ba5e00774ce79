#include "posebench/model_io.hpp"

#include <json.hpp>

#include "posebench/dataset_io.hpp"
#include "posebench/errors.hpp"

namespace posebench {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json nodes_to_json(const std::vector<TreeNodeRec>& nodes,
                   const std::vector<std::pair<std::int32_t, std::int64_t>>* pool) {
  json arr = json::array();
  for (const auto& node : nodes) {
    if (!node.is_leaf()) {
      arr.push_back(json{{"f", node.feature},
                         {"t", node.threshold},
                         {"l", node.left},
                         {"r", node.right}});
    } else if (pool) {
      json counts = json::array();
      for (std::int32_t i = node.leaf_begin; i < node.leaf_end; ++i)
        counts.push_back(json::array({(*pool)[i].first, (*pool)[i].second}));
      arr.push_back(json{{"n", std::move(counts)}});
    } else {
      arr.push_back(json{{"v", node.threshold}});
    }
  }
  return arr;
}

void nodes_from_json(const json& arr, std::vector<TreeNodeRec>& nodes,
                     std::vector<std::pair<std::int32_t, std::int64_t>>* pool) {
  if (!arr.is_array() || arr.empty()) throw DataError("model tree has no nodes");
  nodes.clear();
  nodes.reserve(arr.size());
  for (const auto& item : arr) {
    TreeNodeRec node;
    if (item.contains("f")) {
      node.feature = item.at("f").get<std::int32_t>();
      node.threshold = item.at("t").get<double>();
      node.left = item.at("l").get<std::int32_t>();
      node.right = item.at("r").get<std::int32_t>();
      if (node.feature < 0) throw DataError("model node has negative feature index");
    } else if (item.contains("n")) {
      if (!pool) throw DataError("classification leaf in a regression tree");
      node.leaf_begin = static_cast<std::int32_t>(pool->size());
      for (const auto& pair : item.at("n"))
        pool->emplace_back(pair.at(0).get<std::int32_t>(), pair.at(1).get<std::int64_t>());
      node.leaf_end = static_cast<std::int32_t>(pool->size());
      if (node.leaf_end == node.leaf_begin) throw DataError("model leaf has no class counts");
    } else if (item.contains("v")) {
      node.threshold = item.at("v").get<double>();
    } else {
      throw DataError("model node is neither an internal node nor a leaf");
    }
    nodes.push_back(node);
  }
  // Child indices must stay inside the node array.
  for (const auto& node : nodes) {
    if (node.is_leaf()) continue;
    auto size = static_cast<std::int32_t>(nodes.size());
    if (node.left < 0 || node.left >= size || node.right < 0 || node.right >= size)
      throw DataError("model node child index out of range");
  }
}

json forest_to_json(const ForestModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["model_kind"] = "forest";
  doc["labels"] = model.labels;
  doc["n_features"] = model.n_features;
  doc["params"] = json{{"n_trees", model.params.n_trees},
                       {"mtry", model.params.mtry},
                       {"min_leaf_samples", model.params.min_leaf_samples},
                       {"max_depth", model.params.max_depth},
                       {"histogram_bins", model.params.histogram_bins},
                       {"bootstrap", model.params.bootstrap},
                       {"seed", model.params.seed}};
  json trees = json::array();
  for (const auto& tree : model.trees) trees.push_back(nodes_to_json(tree.nodes, &tree.leaf_pool));
  doc["trees"] = std::move(trees);
  return doc;
}

ForestModel forest_from_json(const json& doc) {
  ForestModel model;
  const json& p = doc.at("params");
  model.params.n_trees = p.at("n_trees").get<int>();
  model.params.mtry = p.at("mtry").get<int>();
  model.params.min_leaf_samples = p.at("min_leaf_samples").get<int>();
  model.params.max_depth = p.at("max_depth").get<int>();
  model.params.histogram_bins = p.at("histogram_bins").get<int>();
  model.params.bootstrap = p.at("bootstrap").get<bool>();
  model.params.seed = p.at("seed").get<std::uint64_t>();
  model.labels = doc.at("labels").get<std::vector<std::string>>();
  model.n_features = doc.at("n_features").get<std::int32_t>();
  const json& trees = doc.at("trees");
  if (static_cast<int>(trees.size()) != model.params.n_trees)
    throw DataError("model tree count does not match params.n_trees");
  for (const auto& t : trees) {
    ClassTree tree;
    tree.n_features = model.n_features;
    tree.n_classes = static_cast<std::int32_t>(model.labels.size());
    nodes_from_json(t, tree.nodes, &tree.leaf_pool);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

json gbt_to_json(const BoostedModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["model_kind"] = "gbt";
  doc["labels"] = model.labels;
  doc["n_features"] = model.n_features;
  doc["params"] = json{{"n_rounds", model.params.n_rounds},
                       {"learning_rate", model.params.learning_rate},
                       {"max_depth", model.params.max_depth},
                       {"min_leaf_samples", model.params.min_leaf_samples},
                       {"histogram_bins", model.params.histogram_bins},
                       {"seed", model.params.seed}};
  doc["base_scores"] = model.base_scores;
  doc["train_loss"] = model.train_loss;
  json trees = json::array();
  for (const auto& tree : model.trees) trees.push_back(nodes_to_json(tree.nodes, nullptr));
  doc["trees"] = std::move(trees);
  return doc;
}

BoostedModel gbt_from_json(const json& doc) {
  BoostedModel model;
  const json& p = doc.at("params");
  model.params.n_rounds = p.at("n_rounds").get<int>();
  model.params.learning_rate = p.at("learning_rate").get<double>();
  model.params.max_depth = p.at("max_depth").get<int>();
  model.params.min_leaf_samples = p.at("min_leaf_samples").get<int>();
  model.params.histogram_bins = p.at("histogram_bins").get<int>();
  model.params.seed = p.at("seed").get<std::uint64_t>();
  model.labels = doc.at("labels").get<std::vector<std::string>>();
  model.n_features = doc.at("n_features").get<std::int32_t>();
  model.base_scores = doc.at("base_scores").get<std::vector<double>>();
  if (doc.contains("train_loss"))
    model.train_loss = doc.at("train_loss").get<std::vector<double>>();
  if (model.base_scores.size() != model.labels.size())
    throw DataError("model base_scores length does not match labels");
  const json& trees = doc.at("trees");
  if (trees.size() !=
      static_cast<std::size_t>(model.params.n_rounds) * model.labels.size())
    throw DataError("model tree count does not match rounds x classes");
  for (const auto& t : trees) {
    RegTree tree;
    tree.n_features = model.n_features;
    nodes_from_json(t, tree.nodes, nullptr);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

json model_to_json(const AnyModel& model);

json ensemble_to_json(const EnsembleModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["model_kind"] = "ensemble";
  doc["labels"] = model.labels;
  doc["n_features"] = model.n_features;
  json members = json::array();
  for (const auto& member : model.members) {
    json inner = std::holds_alternative<ForestModel>(member.model)
                     ? forest_to_json(std::get<ForestModel>(member.model))
                     : gbt_to_json(std::get<BoostedModel>(member.model));
    members.push_back(json{{"weight", member.weight}, {"model", std::move(inner)}});
  }
  doc["members"] = std::move(members);
  return doc;
}

EnsembleModel ensemble_from_json(const json& doc) {
  std::vector<EnsembleMember> members;
  for (const auto& item : doc.at("members")) {
    const json& inner = item.at("model");
    const std::string kind = inner.at("model_kind").get<std::string>();
    EnsembleMember member;
    member.weight = item.at("weight").get<double>();
    if (kind == "forest")
      member.model = forest_from_json(inner);
    else if (kind == "gbt")
      member.model = gbt_from_json(inner);
    else
      throw DataError("ensemble member of unsupported kind '" + kind + "'");
    members.push_back(std::move(member));
  }
  return make_ensemble(std::move(members));
}

json model_to_json(const AnyModel& model) {
  if (std::holds_alternative<ForestModel>(model))
    return forest_to_json(std::get<ForestModel>(model));
  if (std::holds_alternative<BoostedModel>(model))
    return gbt_to_json(std::get<BoostedModel>(model));
  return ensemble_to_json(std::get<EnsembleModel>(model));
}

}  // namespace

std::string save_model(const AnyModel& model) { return model_to_json(model).dump(); }

AnyModel load_model(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("model payload is not valid JSON (truncated?): " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("format_version"))
    throw DataError("model payload lacks format_version");
  const int version = doc.at("format_version").get<int>();
  if (version != kFormatVersion)
    throw DataError("unsupported model format version " + std::to_string(version));
  const std::string kind = doc.at("model_kind").get<std::string>();
  try {
    if (kind == "forest") return forest_from_json(doc);
    if (kind == "gbt") return gbt_from_json(doc);
    if (kind == "ensemble") return ensemble_from_json(doc);
  } catch (const json::exception& e) {
    throw DataError("malformed model payload: " + std::string(e.what()));
  }
  throw DataError("unknown model_kind '" + kind + "'");
}

void save_model_file(const AnyModel& model, const std::string& path) {
  write_file(path, save_model(model));
}

AnyModel load_model_file(const std::string& path) { return load_model(read_file(path)); }

std::vector<double> model_predict_proba(const AnyModel& model, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) -> std::vector<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ForestModel>) return forest_predict_proba(m, x);
        else if constexpr (std::is_same_v<T, BoostedModel>) return gbt_predict_proba(m, x);
        else return ensemble_predict_proba(m, x);
      },
      model);
}

const std::vector<std::string>& model_labels(const AnyModel& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.labels; },
                    model);
}

std::string model_kind(const AnyModel& model) {
  if (std::holds_alternative<ForestModel>(model)) return "forest";
  if (std::holds_alternative<BoostedModel>(model)) return "gbt";
  return "ensemble";
}

}  // namespace posebench
