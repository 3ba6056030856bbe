#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "oxmc/corpus.hpp"

namespace oxmc {

struct SplitConfig {
  std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train, dev, test
  std::uint64_t seed = 0;
};

struct DatasetSplits {
  Dataset train, dev, test;
  std::map<std::size_t, Dataset> test_buckets;  // unique-label count -> bucket
  Dataset test_narrow, test_diverse;
  double mu_train = 0.0;  // mean unique labels per train instance
};

// Re-groups by text defensively, then seeded shuffle + contiguous slices.
// Sizes follow the ratios by largest remainder, so each split is within one
// instance of its exact target. Buckets/narrow/diverse stay unfilled.
// Throws EmptyDataset; InvalidConfig when ratios are negative or don't sum to 1.
DatasetSplits uniform_split(const Dataset& d, const SplitConfig& cfg);

std::map<std::size_t, Dataset> bucket_by_label_count(const Dataset& test);

// narrow: buckets with k <= 2*mu (boundary inclusive); diverse: k > 2*mu.
// Throws ZeroMean when mu <= 0.
std::pair<Dataset, Dataset> aggregate_narrow_diverse(const std::map<std::size_t, Dataset>& buckets,
                                                     double mu);

// Full pipeline: uniform_split, mu_train from the train split, test buckets,
// narrow/diverse aggregation.
DatasetSplits make_splits(const Dataset& d, const SplitConfig& cfg);

double mean_label_count(const Dataset& d);  // 0 on empty

}  // namespace oxmc
