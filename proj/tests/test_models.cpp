#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posebench/ensemble.hpp"
#include "posebench/errors.hpp"
#include "posebench/features.hpp"
#include "posebench/forest.hpp"
#include "posebench/gbt.hpp"
#include "posebench/model_io.hpp"
#include "posebench/rng.hpp"
#include "posebench/synth.hpp"
#include "posebench/training_set.hpp"

#include <json.hpp>

using namespace posebench;

namespace {

// Small separable training set: per-class gaussian blobs in 6 dimensions.
TrainingSet blobs(int n_classes, int per_class, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> y;
  std::vector<std::vector<double>> centers(n_classes, std::vector<double>(6));
  for (auto& c : centers)
    for (auto& v : c) v = 4.0 * rng.next_double();
  for (int c = 0; c < n_classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      std::vector<double> row(6);
      for (int f = 0; f < 6; ++f) row[f] = centers[c][f] + noise * rng.normal();
      rows.push_back(std::move(row));
      y.push_back(c);
    }
  }
  std::vector<std::string> labels;
  for (int c = 0; c < n_classes; ++c) labels.push_back("c" + std::to_string(c));
  return TrainingSet::from_rows(rows, y, labels);
}

std::vector<double> row_of(const TrainingSet& data, std::size_t i) {
  std::vector<double> x(data.d);
  for (std::size_t f = 0; f < data.d; ++f) x[f] = data.at(i, f);
  return x;
}

// Single-leaf forest voting deterministically for one class.
ForestModel stub_forest(int predicted_class, const std::vector<std::string>& labels,
                        int n_features) {
  ClassTree tree;
  tree.n_features = n_features;
  tree.n_classes = static_cast<int>(labels.size());
  tree.nodes.push_back({});
  tree.nodes[0].leaf_begin = 0;
  tree.nodes[0].leaf_end = 1;
  tree.leaf_pool = {{predicted_class, 1}};
  ForestModel model;
  model.params.n_trees = 1;
  model.n_features = n_features;
  model.labels = labels;
  model.trees.push_back(std::move(tree));
  return model;
}

}  // namespace

TEST_CASE("fit_forest basics") {
  TrainingSet data = blobs(3, 30, 0.3, 42);

  SUBCASE("single tree without bootstrap equals fit_tree") {
    ForestParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.mtry = static_cast<int>(data.d);
    params.seed = 9;
    ForestModel forest = fit_forest(data, params);

    Rng rng = Rng::derive(9, {0x464f5245, 0});
    TreeParams tp{params.mtry, params.min_leaf_samples, params.max_depth, 0};
    ClassTree tree = fit_tree(data, tp, rng);
    for (std::size_t i = 0; i < data.n; ++i) {
      auto x = row_of(data, i);
      CHECK(forest_predict_proba(forest, x) == tree_predict(tree, x));
    }
  }
  SUBCASE("same seed gives identical serialized models") {
    ForestParams params;
    params.n_trees = 8;
    params.seed = 5;
    CHECK(save_model(fit_forest(data, params)) == save_model(fit_forest(data, params)));
  }
  SUBCASE("thread count does not change the model") {
    ForestParams params;
    params.n_trees = 8;
    params.seed = 5;
    CHECK(save_model(fit_forest(data, params, 1)) == save_model(fit_forest(data, params, 4)));
  }
  SUBCASE("mtry defaults to floor(sqrt(d))") {
    ForestParams params;
    params.n_trees = 2;
    ForestModel forest = fit_forest(data, params);
    CHECK(forest.params.mtry == static_cast<int>(std::floor(std::sqrt(6.0))));
  }
  SUBCASE("single-class data is rejected") {
    auto bad = TrainingSet::from_rows({{1}, {2}}, {0, 0}, {"A", "B"});
    ForestParams params;
    CHECK_THROWS_AS(fit_forest(bad, params), DataError);
  }
}

TEST_CASE("forest out-of-bag accuracy on separable blobs") {
  TrainingSet data = blobs(12, 16, 0.25, 7);
  ForestParams params;
  params.n_trees = 50;
  params.seed = 3;
  ForestModel forest = fit_forest(data, params);
  CHECK(forest_oob_accuracy(forest, data) >= 0.95);

  SUBCASE("out-of-bag needs bootstrapping") {
    ForestParams full = params;
    full.n_trees = 3;
    full.bootstrap = false;
    ForestModel unbagged = fit_forest(data, full);
    CHECK_THROWS_AS(forest_oob_accuracy(unbagged, data), DataError);
  }
}

TEST_CASE("predict dimension mismatches are errors") {
  TrainingSet data = blobs(3, 10, 0.3, 43);
  ForestParams forest_params;
  forest_params.n_trees = 3;
  ForestModel forest = fit_forest(data, forest_params);
  CHECK_THROWS_AS(forest_predict_proba(forest, std::vector<double>{1.0, 2.0}), DataError);
  GbtParams gbt_params;
  gbt_params.n_rounds = 2;
  BoostedModel gbt = fit_gbt(data, gbt_params);
  CHECK_THROWS_AS(gbt_predict_proba(gbt, std::vector<double>{1.0, 2.0}), DataError);
}

TEST_CASE("forest_predict_proba voting") {
  std::vector<std::string> labels{"A", "B"};
  SUBCASE("two disagreeing trees tie at [0.5, 0.5] and break to class 0") {
    ForestModel model = stub_forest(0, labels, 2);
    ForestModel other = stub_forest(1, labels, 2);
    model.trees.push_back(other.trees[0]);
    model.params.n_trees = 2;
    auto p = forest_predict_proba(model, std::vector<double>{0, 0});
    CHECK(p == std::vector<double>{0.5, 0.5});
    CHECK(argmax_class(p) == 0);
  }
  SUBCASE("agreement is certainty") {
    ForestModel model = stub_forest(1, labels, 2);
    model.trees.push_back(model.trees[0]);
    model.params.n_trees = 2;
    auto p = forest_predict_proba(model, std::vector<double>{0, 0});
    CHECK(p == std::vector<double>{0.0, 1.0});
  }
  SUBCASE("probabilities sum to 1 on random inputs") {
    TrainingSet data = blobs(4, 20, 0.5, 11);
    ForestParams params;
    params.n_trees = 15;
    params.seed = 2;
    ForestModel forest = fit_forest(data, params);
    Rng rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x(6);
      for (auto& v : x) v = 8.0 * rng.next_double() - 2.0;
      auto p = forest_predict_proba(forest, x);
      double sum = 0.0;
      for (double v : p) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("hard vote mode returns vote shares") {
    TrainingSet data = blobs(3, 15, 0.4, 13);
    ForestParams params;
    params.n_trees = 10;
    ForestModel forest = fit_forest(data, params);
    auto p = forest_predict_proba(forest, row_of(data, 0), VoteMode::kHard);
    double sum = 0.0;
    for (double v : p) {
      sum += v;
      CHECK(v * 10 == doctest::Approx(std::round(v * 10)).epsilon(1e-9));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("hard predictions are invariant under tree permutation") {
    TrainingSet data = blobs(4, 25, 0.8, 17);
    ForestParams params;
    params.n_trees = 21;
    params.seed = 4;
    ForestModel forest = fit_forest(data, params);
    ForestModel shuffled = forest;
    Rng rng(5);
    rng.shuffle(shuffled.trees);
    for (std::size_t i = 0; i < data.n; ++i) {
      auto x = row_of(data, i);
      CHECK(argmax_class(forest_predict_proba(forest, x)) ==
            argmax_class(forest_predict_proba(shuffled, x)));
    }
  }
}

TEST_CASE("fit_gbt behavior") {
  SUBCASE("zero rounds predicts class priors") {
    auto data = TrainingSet::from_rows({{0}, {1}, {2}, {3}}, {0, 1, 1, 1}, {"A", "B"});
    GbtParams params;
    params.n_rounds = 0;
    BoostedModel model = fit_gbt(data, params);
    auto p = gbt_predict_proba(model, std::vector<double>{5.0});
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("separable 1-D threshold data reaches training accuracy 1.0") {
    std::vector<std::vector<double>> rows;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
      rows.push_back({static_cast<double>(i)});
      y.push_back(i < 10 ? 0 : 1);
    }
    auto data = TrainingSet::from_rows(rows, y, {"A", "B"});
    GbtParams params;
    params.n_rounds = 10;
    params.learning_rate = 0.3;
    BoostedModel model = fit_gbt(data, params);
    int correct = 0;
    for (int i = 0; i < 20; ++i) {
      auto p = gbt_predict_proba(model, std::vector<double>{static_cast<double>(i)});
      if (argmax_class(p) == y[i]) ++correct;
    }
    CHECK(correct == 20);
  }
  SUBCASE("training log-loss is non-increasing") {
    TrainingSet data = blobs(4, 25, 0.6, 23);
    GbtParams params;
    params.n_rounds = 25;
    params.learning_rate = 0.2;
    BoostedModel model = fit_gbt(data, params);
    REQUIRE(model.train_loss.size() == 26);
    for (std::size_t r = 1; r < model.train_loss.size(); ++r)
      CHECK(model.train_loss[r] <= model.train_loss[r - 1] + 1e-9);
  }
  SUBCASE("round-major tree layout carries rounds x classes trees") {
    TrainingSet data = blobs(3, 10, 0.4, 29);
    GbtParams params;
    params.n_rounds = 4;
    BoostedModel model = fit_gbt(data, params);
    CHECK(model.trees.size() == 12);
  }
  SUBCASE("single-class data is rejected") {
    auto bad = TrainingSet::from_rows({{1}, {2}}, {1, 1}, {"A", "B"});
    CHECK_THROWS_AS(fit_gbt(bad, {}), DataError);
  }
  SUBCASE("thread count does not change the model") {
    TrainingSet data = blobs(3, 15, 0.4, 31);
    GbtParams params;
    params.n_rounds = 6;
    CHECK(save_model(fit_gbt(data, params, 1)) == save_model(fit_gbt(data, params, 3)));
  }
}

TEST_CASE("ensemble combination rules") {
  std::vector<std::string> labels{"A", "B"};
  SUBCASE("single member is the identity") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(1, labels, 2), 1.0});
    EnsembleModel ensemble = make_ensemble(std::move(members));
    CHECK(ensemble_predict_proba(ensemble, std::vector<double>{0, 0}) ==
          std::vector<double>{0.0, 1.0});
  }
  SUBCASE("equal weights average disagreeing members") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(0, labels, 2), 1.0});
    members.push_back({stub_forest(1, labels, 2), 1.0});
    EnsembleModel ensemble = make_ensemble(std::move(members));
    auto p = ensemble_predict_proba(ensemble, std::vector<double>{0, 0});
    CHECK(p == std::vector<double>{0.5, 0.5});
    CHECK(argmax_class(p) == 0);
  }
  SUBCASE("zero-weight members are excluded exactly") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(0, labels, 2), 2.0});
    members.push_back({stub_forest(1, labels, 2), 0.0});
    EnsembleModel ensemble = make_ensemble(std::move(members));
    CHECK(ensemble_predict_proba(ensemble, std::vector<double>{0, 0}) ==
          std::vector<double>{1.0, 0.0});
  }
  SUBCASE("mismatched vocabularies are rejected") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(0, labels, 2), 1.0});
    members.push_back({stub_forest(0, {"A", "C"}, 2), 1.0});
    CHECK_THROWS_AS(make_ensemble(std::move(members)), DataError);
  }
  SUBCASE("all-zero weights are rejected") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(0, labels, 2), 0.0});
    CHECK_THROWS_AS(make_ensemble(std::move(members)), DataError);
  }
  SUBCASE("negative weights are rejected") {
    std::vector<EnsembleMember> members;
    members.push_back({stub_forest(0, labels, 2), -1.0});
    CHECK_THROWS_AS(make_ensemble(std::move(members)), DataError);
  }
}

TEST_CASE("model save/load round trip") {
  TrainingSet data = blobs(3, 20, 0.4, 37);
  Rng rng(55);
  auto random_input = [&rng] {
    std::vector<double> x(6);
    for (auto& v : x) v = 8.0 * rng.next_double() - 2.0;
    return x;
  };

  SUBCASE("forest predictions survive serialization bitwise") {
    ForestParams params;
    params.n_trees = 12;
    params.seed = 8;
    AnyModel model = fit_forest(data, params);
    AnyModel loaded = load_model(save_model(model));
    for (int trial = 0; trial < 100; ++trial) {
      auto x = random_input();
      CHECK(model_predict_proba(model, x) == model_predict_proba(loaded, x));
    }
    CHECK(save_model(loaded) == save_model(model));
  }
  SUBCASE("gbt and ensemble round trip") {
    GbtParams gbt_params;
    gbt_params.n_rounds = 5;
    std::vector<EnsembleMember> members;
    members.push_back({fit_gbt(data, gbt_params), 1.0});
    ForestParams forest_params;
    forest_params.n_trees = 5;
    members.push_back({fit_forest(data, forest_params), 2.0});
    AnyModel model = make_ensemble(std::move(members));
    AnyModel loaded = load_model(save_model(model));
    CHECK(model_kind(loaded) == "ensemble");
    for (int trial = 0; trial < 50; ++trial) {
      auto x = random_input();
      CHECK(model_predict_proba(model, x) == model_predict_proba(loaded, x));
    }
  }
  SUBCASE("unknown format version is rejected") {
    ForestParams params;
    params.n_trees = 2;
    auto doc = nlohmann::json::parse(save_model(fit_forest(data, params)));
    doc["format_version"] = 99;
    CHECK_THROWS_WITH_AS(load_model(doc.dump()), doctest::Contains("version"), DataError);
  }
  SUBCASE("truncated payload is rejected") {
    ForestParams params;
    params.n_trees = 2;
    std::string payload = save_model(fit_forest(data, params));
    CHECK_THROWS_AS(load_model(payload.substr(0, payload.size() / 2)), ParseError);
  }
  SUBCASE("tampering with a stored threshold changes predictions") {
    ForestParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.mtry = 6;
    AnyModel model = fit_forest(data, params);
    auto doc = nlohmann::json::parse(save_model(model));
    bool patched = false;
    for (auto& node : doc["trees"][0]) {
      if (node.contains("t")) {
        node["t"] = 1e9;  // push the root split far right
        patched = true;
        break;
      }
    }
    REQUIRE(patched);
    AnyModel tampered = load_model(doc.dump());
    bool any_changed = false;
    for (std::size_t i = 0; i < data.n && !any_changed; ++i) {
      auto x = row_of(data, i);
      any_changed = model_predict_proba(model, x) != model_predict_proba(tampered, x);
    }
    CHECK(any_changed);
  }
}
