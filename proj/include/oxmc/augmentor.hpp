#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "oxmc/decoder.hpp"

namespace oxmc {

struct AugmentationConfig {
  double target_mean = 0.0;  // <= 0 means: compute from the input dataset
  int samples_per_item = 5;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_output_size = 50000;
  int max_tokens_per_kp = 8;
  int max_total_tokens = 256;
  std::size_t max_text_tokens = 32;
};

// Instances whose unique-label count strictly exceeds mean. Throws ZeroMean.
Dataset select_train_diverse(const Dataset& d, double mean);

// Samples cfg.samples_per_item keyphrases (seeded, per-item derived seed),
// merges them into the label list with frequency 0, deduplicates against the
// observed labels, and accepts only when the merged unique count exceeds
// cfg.target_mean. Returns nullopt on rejection.
std::optional<Instance> augment_instance(const Instance& inst, const NgramScorer& model,
                                         const AugmentationConfig& cfg);

struct PosttrainResult {
  Dataset data;
  // item id -> "original" | "augmented", for items present in data.
  std::map<std::string, std::string> provenance;
};

// Union of the diverse selection (kept as-is) and accepted augmentations of
// the remaining instances, seeded-shuffled, truncated to max_output_size.
PosttrainResult build_posttrain_set(const Dataset& d, const NgramScorer& model,
                                    const AugmentationConfig& cfg);

}  // namespace oxmc
