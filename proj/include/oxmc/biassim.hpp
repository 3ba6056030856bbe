#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oxmc/corpus.hpp"

namespace oxmc {

// Synthetic world with category structure: items of one category share text
// words, and every true label is built from those shared words, so a count
// model can generalize from popular items to rarely annotated ones.
struct UniverseConfig {
  std::size_t num_items = 1000;
  std::size_t min_labels = 1;
  std::size_t max_labels = 15;
  double mean_labels = 8.0;
  std::size_t vocab_words = 60;  // category word pool; 6 words per category
  double zipf_s = 1.1;           // popularity weight of rank r is (r+1)^-s
  std::uint64_t seed = 0;
};

struct UniverseItem {
  std::string item_id;
  std::string text;
  std::vector<Keyphrase> true_labels;
  double weight = 0.0;  // normalized popularity
};

struct Universe {
  std::vector<UniverseItem> items;
  UniverseConfig cfg;
};

// Deterministic from cfg.seed. Label count per item is
// min + Binomial(max - min, (mean - min) / (max - min)).
Universe generate_universe(const UniverseConfig& cfg);

// Each interaction draws an item by popularity, then one label uniformly from
// its true set; one frequency-1 record per interaction.
std::vector<InteractionRecord> simulate_annotations(const Universe& u,
                                                    std::size_t total_interactions,
                                                    std::uint64_t seed);

// Mean over items of |dedup(preds)[:k] ∩ true set| / |true set|. Throws
// UnknownItem when ids mismatch in either direction.
double coverage(const Universe& u, const std::vector<Prediction>& preds, int k);

// JSON Lines {"id","text","labels":[string],"weight":number}.
void write_universe(const Universe& u, const std::filesystem::path& p);
Universe read_universe(const std::filesystem::path& p);

}  // namespace oxmc
