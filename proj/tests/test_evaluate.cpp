#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "posebench/errors.hpp"
#include "posebench/evaluate.hpp"
#include "posebench/folds.hpp"
#include "posebench/metrics.hpp"
#include "posebench/report_io.hpp"
#include "posebench/rng.hpp"

using namespace posebench;

namespace {

struct VideoSpec {
  std::string video, subject, camera, label;
  int frames;
};

// Featurized dataset stub: feature[0] = label index, feature[1] = frame.
Dataset make_dataset(const std::vector<VideoSpec>& videos) {
  Dataset ds;
  std::set<std::string> labels;
  for (const auto& v : videos) labels.insert(v.label);
  ds.labels.assign(labels.begin(), labels.end());
  for (const auto& v : videos) {
    for (int frame = 0; frame < v.frames; ++frame) {
      ds.meta.push_back(SampleMeta{v.video, v.subject, v.camera, frame, v.label});
      FeatureVector fv{};
      fv[0] = static_cast<double>(ds.label_index(v.label));
      fv[1] = static_cast<double>(frame);
      ds.features.push_back(fv);
    }
  }
  return ds;
}

// n_subjects subjects x n_videos_each single-frame videos.
Dataset simple_subject_dataset(int n_subjects, int frames_per_video = 3) {
  std::vector<VideoSpec> videos;
  for (int s = 0; s < n_subjects; ++s) {
    char subject[16], video[32];
    std::snprintf(subject, sizeof(subject), "s%03d", s);
    std::snprintf(video, sizeof(video), "v%03d", s);
    videos.push_back({video, subject, "cam0", s % 2 ? "up" : "down", frames_per_video});
  }
  return make_dataset(videos);
}

}  // namespace

TEST_CASE("frame_folds partitions near-equally and deterministically") {
  Dataset ds = make_dataset({{"v1", "s1", "c1", "a", 100}});
  SplitPlan plan = frame_folds(ds, 10, 42);
  REQUIRE(plan.folds.size() == 10);
  for (const auto& fold : plan.folds) {
    CHECK(fold.test.size() == 10);
    CHECK(fold.train.size() == 90);
  }

  SUBCASE("101 samples gives nine folds of 10 and one of 11") {
    Dataset ds2 = make_dataset({{"v1", "s1", "c1", "a", 101}});
    SplitPlan plan2 = frame_folds(ds2, 10, 42);
    std::multiset<std::size_t> sizes;
    for (const auto& fold : plan2.folds) sizes.insert(fold.test.size());
    CHECK(sizes.count(10) == 9);
    CHECK(sizes.count(11) == 1);
  }
  SUBCASE("same seed reproduces the plan") {
    SplitPlan again = frame_folds(ds, 10, 42);
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
      CHECK(plan.folds[f].test == again.folds[f].test);
      CHECK(plan.folds[f].train == again.folds[f].train);
    }
  }
  SUBCASE("test sets partition the index space") {
    std::set<std::int32_t> seen;
    for (const auto& fold : plan.folds)
      for (auto idx : fold.test) CHECK(seen.insert(idx).second);
    CHECK(seen.size() == ds.size());
  }
  SUBCASE("train and test are disjoint within each fold") {
    for (const auto& fold : plan.folds) {
      std::set<std::int32_t> train(fold.train.begin(), fold.train.end());
      for (auto idx : fold.test) CHECK(!train.count(idx));
    }
  }
  SUBCASE("dataset smaller than k is an error") {
    Dataset tiny = make_dataset({{"v1", "s1", "c1", "a", 5}});
    CHECK_THROWS_AS(frame_folds(tiny, 10, 1), DataError);
  }
  SUBCASE("stratified folds balance labels") {
    Dataset mixed = make_dataset({{"v1", "s1", "c1", "a", 40}, {"v2", "s1", "c1", "b", 40}});
    SplitPlan strat = frame_folds(mixed, 4, 7, true);
    for (const auto& fold : strat.folds) {
      int a = 0, b = 0;
      for (auto idx : fold.test) (mixed.meta[idx].label == "a" ? a : b)++;
      CHECK(a == 10);
      CHECK(b == 10);
    }
  }
}

TEST_CASE("subject_folds tests every subject exactly once") {
  SUBCASE("51 subjects in 10 folds: nine groups of 5, one of 6") {
    Dataset ds = simple_subject_dataset(51);
    SplitPlan plan = subject_folds(ds, 10, 3);
    REQUIRE(plan.folds.size() == 10);
    std::multiset<std::size_t> group_sizes;
    std::set<std::string> tested;
    for (const auto& fold : plan.folds) {
      std::set<std::string> subjects;
      for (auto idx : fold.test) subjects.insert(ds.meta[idx].subject_id);
      group_sizes.insert(subjects.size());
      for (const auto& s : subjects) CHECK(tested.insert(s).second);
    }
    CHECK(tested.size() == 51);
    CHECK(group_sizes.count(5) == 9);
    CHECK(group_sizes.count(6) == 1);
  }
  SUBCASE("10 subjects in 10 folds: one subject per test fold") {
    Dataset ds = simple_subject_dataset(10);
    SplitPlan plan = subject_folds(ds, 10, 3);
    for (const auto& fold : plan.folds) {
      std::set<std::string> subjects;
      for (auto idx : fold.test) subjects.insert(ds.meta[idx].subject_id);
      CHECK(subjects.size() == 1);
    }
  }
  SUBCASE("no subject appears on both sides of a fold") {
    Dataset ds = simple_subject_dataset(23);
    SplitPlan plan = subject_folds(ds, 5, 11);
    for (const auto& fold : plan.folds) {
      std::set<std::string> train, test;
      for (auto idx : fold.train) train.insert(ds.meta[idx].subject_id);
      for (auto idx : fold.test) test.insert(ds.meta[idx].subject_id);
      for (const auto& s : test) CHECK(!train.count(s));
    }
  }
  SUBCASE("fewer subjects than folds is an error") {
    Dataset ds = simple_subject_dataset(4);
    CHECK_THROWS_AS(subject_folds(ds, 10, 1), DataError);
  }
}

TEST_CASE("camera_splits enumerates camera subsets") {
  std::vector<VideoSpec> videos;
  for (int cam = 0; cam < 4; ++cam) {
    char camera[16], video[32];
    std::snprintf(camera, sizeof(camera), "cam%d", cam);
    std::snprintf(video, sizeof(video), "v%d", cam);
    videos.push_back({video, "s0", camera, cam % 2 ? "a" : "b", 4});
  }
  Dataset ds = make_dataset(videos);

  SUBCASE("4 choose 3 yields 4 folds each testing one camera") {
    SplitPlan plan = camera_splits(ds, 3);
    REQUIRE(plan.folds.size() == 4);
    for (const auto& fold : plan.folds) {
      std::set<std::string> test_cams;
      for (auto idx : fold.test) test_cams.insert(ds.meta[idx].camera_id);
      CHECK(test_cams.size() == 1);
      CHECK(fold.train.size() == 12);
      CHECK(fold.test.size() == 4);
    }
  }
  SUBCASE("4 choose 1 yields 4 folds each testing three cameras") {
    SplitPlan plan = camera_splits(ds, 1);
    REQUIRE(plan.folds.size() == 4);
    for (const auto& fold : plan.folds) {
      std::set<std::string> test_cams;
      for (auto idx : fold.test) test_cams.insert(ds.meta[idx].camera_id);
      CHECK(test_cams.size() == 3);
    }
  }
  SUBCASE("train and test cameras are disjoint") {
    for (int n = 1; n <= 3; ++n) {
      SplitPlan plan = camera_splits(ds, n);
      for (const auto& fold : plan.folds) {
        std::set<std::string> train_cams, test_cams;
        for (auto idx : fold.train) train_cams.insert(ds.meta[idx].camera_id);
        for (auto idx : fold.test) test_cams.insert(ds.meta[idx].camera_id);
        for (const auto& c : test_cams) CHECK(!train_cams.count(c));
      }
    }
  }
  SUBCASE("two cameras with one training camera yields 2 folds") {
    Dataset two = make_dataset({{"v0", "s0", "cam0", "a", 3}, {"v1", "s0", "cam1", "b", 3}});
    CHECK(camera_splits(two, 1).folds.size() == 2);
  }
  SUBCASE("out-of-range n_train_cameras is an error") {
    CHECK_THROWS_AS(camera_splits(ds, 0), ConfigError);
    CHECK_THROWS_AS(camera_splits(ds, 4), ConfigError);
  }
}

TEST_CASE("check_leakage flags video overlap") {
  SUBCASE("frame folds over multi-frame videos leak") {
    Dataset ds = make_dataset(
        {{"v1", "s1", "c1", "a", 30}, {"v2", "s2", "c1", "b", 30}});
    SplitPlan plan = frame_folds(ds, 5, 1);
    LeakageVerdict verdict = check_leakage(plan, ds);
    CHECK(verdict.leaky);
    CHECK(!verdict.violations.empty());
  }
  SUBCASE("subject folds never leak") {
    Dataset ds = simple_subject_dataset(12, 5);
    LeakageVerdict verdict = check_leakage(subject_folds(ds, 4, 9), ds);
    CHECK(!verdict.leaky);
    CHECK(verdict.violations.empty());
  }
  SUBCASE("camera splits never leak") {
    std::vector<VideoSpec> videos;
    for (int cam = 0; cam < 3; ++cam)
      for (int s = 0; s < 2; ++s)
        videos.push_back({"v" + std::to_string(cam) + std::to_string(s),
                          "s" + std::to_string(s), "cam" + std::to_string(cam),
                          s % 2 ? "a" : "b", 6});
    Dataset ds = make_dataset(videos);
    CHECK(!check_leakage(camera_splits(ds, 2), ds).leaky);
  }
  SUBCASE("single-frame videos cannot leak under frame folds") {
    Dataset ds = simple_subject_dataset(40, 1);
    CHECK(!check_leakage(frame_folds(ds, 5, 2), ds).leaky);
  }
  SUBCASE("leaky <=> violations nonempty") {
    Dataset ds = make_dataset({{"v1", "s1", "c1", "a", 20}, {"v2", "s2", "c1", "b", 20}});
    for (int seed = 0; seed < 5; ++seed) {
      LeakageVerdict verdict = check_leakage(frame_folds(ds, 4, seed), ds);
      CHECK(verdict.leaky == !verdict.violations.empty());
    }
  }
}

TEST_CASE("compute_metrics on worked confusions") {
  SUBCASE("diagonal matrix is all ones") {
    ConfusionMatrix cm({"a", "b"});
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 5;
    MetricsSummary m = compute_metrics(cm);
    CHECK(m.per_class[0].precision == 1.0);
    CHECK(m.per_class[1].f1 == 1.0);
    CHECK(m.macro.f1 == 1.0);
    CHECK(m.accuracy == 1.0);
  }
  SUBCASE("hand-computed 2x2 fixture") {
    ConfusionMatrix cm({"a", "b"});
    cm.at(0, 0) = 3;
    cm.at(0, 1) = 1;
    cm.at(1, 0) = 2;
    cm.at(1, 1) = 4;
    MetricsSummary m = compute_metrics(cm);
    CHECK(m.per_class[0].precision == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.per_class[1].precision == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m.per_class[0].recall == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(m.per_class[1].recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.accuracy == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("class with no truth and no predictions scores zero by convention") {
    ConfusionMatrix cm({"a", "b", "ghost"});
    cm.at(0, 0) = 2;
    cm.at(1, 1) = 2;
    MetricsSummary m = compute_metrics(cm);
    CHECK(m.per_class[2].precision == 0.0);
    CHECK(m.per_class[2].recall == 0.0);
    CHECK(m.per_class[2].f1 == 0.0);
    CHECK(m.macro.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("all-zero matrix is an error") {
    ConfusionMatrix cm({"a", "b"});
    CHECK_THROWS_AS(compute_metrics(cm), DataError);
  }
}

TEST_CASE("compute_metrics matches a per-sample counting oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    int c = 2 + static_cast<int>(rng.uniform_index(6));
    std::vector<std::string> labels;
    for (int j = 0; j < c; ++j) labels.push_back("L" + std::to_string(j));
    ConfusionMatrix cm(labels);
    std::vector<std::pair<int, int>> pairs;
    for (int t = 0; t < c; ++t)
      for (int p = 0; p < c; ++p) {
        auto count = static_cast<std::int64_t>(rng.uniform_index(8));
        cm.at(t, p) = count;
        for (int i = 0; i < count; ++i) pairs.emplace_back(t, p);
      }
    if (pairs.empty()) {
      cm.at(0, 0) = 1;
      pairs.emplace_back(0, 0);
    }

    MetricsSummary m = compute_metrics(cm);
    int correct = 0;
    for (int j = 0; j < c; ++j) {
      std::int64_t tp = 0, fp = 0, fn = 0;
      for (auto [t, p] : pairs) {
        if (t == j && p == j) ++tp;
        if (t != j && p == j) ++fp;
        if (t == j && p != j) ++fn;
      }
      double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
      double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
      double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
      CHECK(m.per_class[j].precision == doctest::Approx(precision).epsilon(1e-12));
      CHECK(m.per_class[j].recall == doctest::Approx(recall).epsilon(1e-12));
      CHECK(m.per_class[j].f1 == doctest::Approx(f1).epsilon(1e-12));
    }
    for (auto [t, p] : pairs) correct += t == p;
    CHECK(m.accuracy ==
          doctest::Approx(static_cast<double>(correct) / pairs.size()).epsilon(1e-12));
  }
}

TEST_CASE("hierarchy_rollup semantics") {
  std::vector<std::string> labels{"a1", "a2", "b1", "b2"};
  Hierarchy h;
  h.up["a1"] = {"ga", "s"};
  h.up["a2"] = {"ga", "s"};
  h.up["b1"] = {"gb", "s"};
  h.up["b2"] = {"gb", "s"};

  SUBCASE("wrong leaf but same superclass counts at coarse levels") {
    std::vector<int> pred{1}, truth{0};  // a2 vs a1
    auto acc = hierarchy_rollup(pred, truth, labels, h);
    CHECK(acc["level3"] == 0.0);
    CHECK(acc["level2"] == 1.0);
    CHECK(acc["level1"] == 1.0);
  }
  SUBCASE("identical predictions are perfect at all levels") {
    std::vector<int> pred{0, 1, 2, 3}, truth{0, 1, 2, 3};
    auto acc = hierarchy_rollup(pred, truth, labels, h);
    CHECK(acc["level1"] == 1.0);
    CHECK(acc["level2"] == 1.0);
    CHECK(acc["level3"] == 1.0);
  }
  SUBCASE("coarsening never reduces accuracy") {
    Rng rng(71);
    for (int trial = 0; trial < 1000; ++trial) {
      int n_labels = 2 + static_cast<int>(rng.uniform_index(12));
      std::vector<std::string> vocab;
      Hierarchy hierarchy;
      int n_groups = 1 + static_cast<int>(rng.uniform_index(5));
      std::vector<std::string> group_parent(n_groups);
      for (int g = 0; g < n_groups; ++g)
        group_parent[g] = "s" + std::to_string(rng.uniform_index(3));
      for (int l = 0; l < n_labels; ++l) {
        std::string leaf = "leaf" + std::to_string(l);
        vocab.push_back(leaf);
        int g = static_cast<int>(rng.uniform_index(n_groups));
        hierarchy.up[leaf] = {"g" + std::to_string(g), group_parent[g]};
      }
      int n = 1 + static_cast<int>(rng.uniform_index(40));
      std::vector<int> pred(n), truth(n);
      for (int i = 0; i < n; ++i) {
        pred[i] = static_cast<int>(rng.uniform_index(n_labels));
        truth[i] = static_cast<int>(rng.uniform_index(n_labels));
      }
      auto acc = hierarchy_rollup(pred, truth, vocab, hierarchy);
      CHECK(acc["level1"] >= acc["level2"]);
      CHECK(acc["level2"] >= acc["level3"]);
    }
  }
  SUBCASE("missing label is an error") {
    std::vector<int> pred{0}, truth{0};
    CHECK_THROWS_AS(hierarchy_rollup(pred, truth, {"unmapped"}, h), DataError);
  }
  SUBCASE("non-tree hierarchies are rejected") {
    Hierarchy broken = h;
    broken.up["b2"] = {"ga", "other"};  // ga now has two parents
    std::vector<int> pred{0}, truth{0};
    CHECK_THROWS_AS(hierarchy_rollup(pred, truth, labels, broken), DataError);
  }
}

namespace {

TrainerFn majority_stub() {
  return [](const TrainingSet& train, std::uint64_t) {
    std::vector<double> dist(train.labels.size(), 0.0);
    for (auto label : train.y) dist[label] += 1.0;
    for (auto& v : dist) v /= static_cast<double>(train.y.size());
    return Predictor{[dist](std::span<const double>) { return dist; }};
  };
}

// Reads the label the fixture encodes into feature 0.
TrainerFn perfect_stub() {
  return [](const TrainingSet& train, std::uint64_t) {
    const std::size_t n_classes = train.labels.size();
    return Predictor{[n_classes](std::span<const double> x) {
      std::vector<double> p(n_classes, 0.0);
      p[static_cast<std::size_t>(std::llround(x[0]))] = 1.0;
      return p;
    }};
  };
}

}  // namespace

TEST_CASE("run_cv pooling and reporting") {
  SUBCASE("majority stub accuracy equals test-fold prevalence") {
    Dataset ds = make_dataset({{"v1", "s1", "c1", "a", 6},
                               {"v2", "s2", "c1", "b", 3},
                               {"v3", "s3", "c1", "b", 1}});
    SplitPlan plan;
    plan.grouping = Grouping::kSubject;
    plan.folds.push_back(Fold{{0, 1, 2, 3, 4, 5, 6, 7, 8}, {9}});  // train has 6 a, 3 b
    plan.train_fraction = 0.9;
    EvalReport report = run_cv(ds, plan, majority_stub(), {});
    CHECK(report.metrics.accuracy == 0.0);  // lone test sample is 'b', majority is 'a'

    SplitPlan plan2;
    plan2.grouping = Grouping::kSubject;
    plan2.folds.push_back(Fold{{0, 1, 2, 3, 4, 6, 7, 8, 9}, {5}});  // test sample is 'a'
    EvalReport report2 = run_cv(ds, plan2, majority_stub(), {});
    CHECK(report2.metrics.accuracy == 1.0);
  }
  SUBCASE("perfect stub scores 1.0 everywhere") {
    Dataset ds = simple_subject_dataset(12, 4);
    SplitPlan plan = subject_folds(ds, 4, 5);
    EvalReport report = run_cv(ds, plan, perfect_stub(), {});
    CHECK(report.metrics.accuracy == 1.0);
    for (const auto& m : report.metrics.per_class) CHECK(m.f1 == 1.0);
    CHECK(!report.leakage.leaky);
  }
  SUBCASE("pooled confusion total equals dataset size under subject folds") {
    Dataset ds = simple_subject_dataset(10, 7);
    SplitPlan plan = subject_folds(ds, 5, 2);
    EvalReport report = run_cv(ds, plan, majority_stub(), {});
    CHECK(report.confusion.total() == static_cast<std::int64_t>(ds.size()));
  }
  SUBCASE("class absent from a training fold is a warning, not an error") {
    // Subject s000 holds every 'rare' sample; 3 classes keep training valid.
    Dataset ds = make_dataset({{"v0", "s000", "c1", "rare", 2},
                               {"v1", "s001", "c1", "a", 4},
                               {"v2", "s002", "c1", "b", 4},
                               {"v3", "s003", "c1", "a", 4},
                               {"v4", "s004", "c1", "b", 4}});
    SplitPlan plan = subject_folds(ds, 5, 3);
    EvalReport report = run_cv(ds, plan, majority_stub(), {});
    bool warned = false;
    for (const auto& w : report.warnings)
      warned = warned || w.find("rare") != std::string::npos;
    CHECK(warned);
  }
  SUBCASE("reports embed the leakage verdict") {
    Dataset ds = make_dataset({{"v1", "s1", "c1", "a", 20}, {"v2", "s2", "c1", "b", 20}});
    EvalReport report = run_cv(ds, frame_folds(ds, 4, 3), perfect_stub(), {});
    CHECK(report.leakage.leaky);
    auto doc = report_to_json(report);
    CHECK(doc["leakage"]["leaky"].get<bool>());
    CHECK(doc["strategy"] == "frame");
  }
  SUBCASE("per-fold averaging is available behind the options flag") {
    Dataset ds = simple_subject_dataset(8, 5);
    SplitPlan plan = subject_folds(ds, 4, 2);
    CvOptions options;
    options.per_fold_average = true;
    EvalReport report = run_cv(ds, plan, perfect_stub(), options);
    CHECK(report.metrics.accuracy == 1.0);
    CHECK(report.per_fold_average);
  }
  SUBCASE("bit-identical across reruns and thread counts") {
    Dataset ds = simple_subject_dataset(9, 6);
    ds.hierarchy = Hierarchy{};
    for (const auto& label : ds.labels) ds.hierarchy->up[label] = {"g", "s"};
    SplitPlan plan = subject_folds(ds, 3, 8);
    CvOptions serial;
    serial.n_threads = 1;
    CvOptions parallel;
    parallel.n_threads = 4;
    auto a = report_to_json(run_cv(ds, plan, majority_stub(), serial)).dump();
    auto b = report_to_json(run_cv(ds, plan, majority_stub(), serial)).dump();
    auto c = report_to_json(run_cv(ds, plan, majority_stub(), parallel)).dump();
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("report rendering produces the table shape") {
  Dataset ds = simple_subject_dataset(8, 3);
  EvalReport report = run_cv(ds, subject_folds(ds, 4, 2), perfect_stub(), {});
  auto doc = report_to_json(report, nlohmann::json{{"command", "eval"}});
  std::string text = render_report_text(doc);
  CHECK(text.find("Precision") != std::string::npos);
  CHECK(text.find("Average") != std::string::npos);
  CHECK(text.find("100.00%") != std::string::npos);
  CHECK(text.find("Leakage check: clean") != std::string::npos);

  SUBCASE("leaky reports carry a warning line") {
    Dataset leaky_ds =
        make_dataset({{"v1", "s1", "c1", "a", 20}, {"v2", "s2", "c1", "b", 20}});
    EvalReport leaky = run_cv(leaky_ds, frame_folds(leaky_ds, 4, 3), perfect_stub(), {});
    std::string leaky_text = render_report_text(report_to_json(leaky));
    CHECK(leaky_text.find("WARNING: target leakage detected") != std::string::npos);
  }
  SUBCASE("confusion CSV has labels as header and rows") {
    std::string csv = confusion_to_csv(report.confusion);
    CHECK(csv.find("truth,down,up") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }
}
