#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

enum class Grouping { kFrame, kSubject, kCamera };

std::string grouping_name(Grouping g);

struct Fold {
  std::vector<std::int32_t> train;
  std::vector<std::int32_t> test;
};

struct SplitPlan {
  Grouping grouping = Grouping::kFrame;
  std::vector<Fold> folds;
  double train_fraction = 0.0;  // mean train/(train+test) over folds
  int k = 0;                    // frame/subject plans
  int n_train_cameras = 0;      // camera plans
  std::uint64_t seed = 0;
};

// Vanilla k-fold over sample indices: shuffled by seed, partitioned into k
// near-equal folds (sizes differ by at most 1). This plan intentionally
// permits target leakage. Optional stratification balances labels per fold.
SplitPlan frame_folds(const Dataset& dataset, int k, std::uint64_t seed,
                      bool stratified = false);

// Distinct subjects shuffled by seed and partitioned into k groups; fold i
// tests every sample of group i. Each subject is tested exactly once.
SplitPlan subject_folds(const Dataset& dataset, int k, std::uint64_t seed);

// One fold per size-n_train_cameras camera subset (all combinations,
// lexicographic): train on the subset, test on all remaining cameras.
SplitPlan camera_splits(const Dataset& dataset, int n_train_cameras);

struct LeakageVerdict {
  struct Violation {
    int fold = 0;
    std::string video_id;
    std::string group_key;
  };
  bool leaky = false;
  std::vector<Violation> violations;
};

// Leaky iff any video has samples in both train and test of the same fold.
LeakageVerdict check_leakage(const SplitPlan& plan, const Dataset& dataset);

}  // namespace posebench
