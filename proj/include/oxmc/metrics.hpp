#pragma once

#include <set>
#include <string>
#include <vector>

#include "oxmc/corpus.hpp"

namespace oxmc {

using KeyphraseSet = std::set<Keyphrase>;

struct PrfTriple {
  double p = 0, r = 0, f1 = 0;
};

struct InstanceMetrics {
  std::string item_id;
  double p_at_k = 0, r_at_k = 0, f1_at_k = 0;
  double p_at_O = 0, r_at_O = 0, f1_at_O = 0;
  double b_at_k = 0;
  double uniq_at_k = 0;
};

// Macro (unweighted) means over instances with non-empty ground truth.
struct MetricReport {
  int k = 0;
  std::size_t evaluated = 0;
  std::size_t skipped_empty_gt = 0;
  std::vector<InstanceMetrics> per_instance;
  double p_at_k = 0, r_at_k = 0, f1_at_k = 0;
  double p_at_O = 0, r_at_O = 0, f1_at_O = 0;
  double b_at_k = 0;
  double uniq_at_k = 0;
};

// First-occurrence deduplication, order preserved.
std::vector<Keyphrase> dedup_keyphrases(const std::vector<Keyphrase>& kps);

KeyphraseSet ground_truth_of(const Instance& inst);

// Predictions are deduplicated then truncated to k. P uses the generated count
// as denominator (lazy models shrink it); R uses |gt|; F1 of (0,0) is 0.
// Throws EmptyGroundTruth; InvalidConfig for k < 1.
PrfTriple precision_recall_f1_at_k(const Prediction& pred, const KeyphraseSet& gt, int k);

// O = |gt|. Raw predictions capped at 100 first, then deduplicated, then cut to O.
PrfTriple f1_at_O(const Prediction& pred, const KeyphraseSet& gt);

// |dedup(preds)[:k] ∩ gt| / k; the denominator never shrinks.
double budget_accuracy_at_k(const Prediction& pred, const KeyphraseSet& gt, int k);

// Distinct keyphrases among the first k generated (raw order, pre-dedup).
std::size_t unique_k_at_k(const Prediction& pred, int k);

// Mean of elementwise AND. Throws LengthMismatch, EmptyInput.
double rel_combine(const std::vector<int>& g, const std::vector<int>& uni);

// Pairs predictions to instances by item_id. Instances with empty ground truth
// are skipped and counted. Throws UnknownItem for a prediction whose id is not
// in d, MissingPrediction for an instance without one.
MetricReport evaluate_dataset(const std::vector<Prediction>& preds, const Dataset& d, int k);

}  // namespace oxmc
