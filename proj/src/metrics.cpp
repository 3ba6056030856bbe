#include "oxmc/metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace oxmc {

namespace {

constexpr std::size_t kRawCap = 100;  // hard cap on raw predictions for the O cutoff

double f1_of(double p, double r) { return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0; }

std::size_t intersect_count(const std::vector<Keyphrase>& kps, const KeyphraseSet& gt) {
  std::size_t hits = 0;
  for (const Keyphrase& kp : kps) hits += gt.count(kp);
  return hits;
}

PrfTriple prf_on_prefix(const std::vector<Keyphrase>& deduped, const KeyphraseSet& gt,
                        std::size_t cutoff) {
  std::vector<Keyphrase> top(deduped.begin(),
                             deduped.begin() + std::min(cutoff, deduped.size()));
  std::size_t hits = intersect_count(top, gt);
  PrfTriple t;
  t.p = top.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(top.size());
  t.r = static_cast<double>(hits) / static_cast<double>(gt.size());
  t.f1 = f1_of(t.p, t.r);
  return t;
}

}  // namespace

std::vector<Keyphrase> dedup_keyphrases(const std::vector<Keyphrase>& kps) {
  std::vector<Keyphrase> out;
  KeyphraseSet seen;
  for (const Keyphrase& kp : kps)
    if (seen.insert(kp).second) out.push_back(kp);
  return out;
}

KeyphraseSet ground_truth_of(const Instance& inst) {
  KeyphraseSet gt;
  for (const LabelEntry& le : inst.labels) gt.insert(le.kp);
  return gt;
}

PrfTriple precision_recall_f1_at_k(const Prediction& pred, const KeyphraseSet& gt, int k) {
  if (k < 1) raise(Errc::invalid_config, "k must be >= 1");
  if (gt.empty()) raise(Errc::empty_ground_truth, "metrics need non-empty ground truth");
  return prf_on_prefix(dedup_keyphrases(pred.kps), gt, static_cast<std::size_t>(k));
}

PrfTriple f1_at_O(const Prediction& pred, const KeyphraseSet& gt) {
  if (gt.empty()) raise(Errc::empty_ground_truth, "metrics need non-empty ground truth");
  std::vector<Keyphrase> raw(pred.kps.begin(),
                             pred.kps.begin() + std::min(kRawCap, pred.kps.size()));
  return prf_on_prefix(dedup_keyphrases(raw), gt, gt.size());
}

double budget_accuracy_at_k(const Prediction& pred, const KeyphraseSet& gt, int k) {
  if (k < 1) raise(Errc::invalid_config, "k must be >= 1");
  std::vector<Keyphrase> deduped = dedup_keyphrases(pred.kps);
  deduped.resize(std::min(deduped.size(), static_cast<std::size_t>(k)));
  return static_cast<double>(intersect_count(deduped, gt)) / static_cast<double>(k);
}

std::size_t unique_k_at_k(const Prediction& pred, int k) {
  if (k < 1) raise(Errc::invalid_config, "k must be >= 1");
  KeyphraseSet seen;
  std::size_t n = std::min(pred.kps.size(), static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) seen.insert(pred.kps[i]);
  return seen.size();
}

double rel_combine(const std::vector<int>& g, const std::vector<int>& uni) {
  if (g.size() != uni.size())
    raise(Errc::length_mismatch, "judgment and universe-flag sequences differ in length");
  if (g.empty()) raise(Errc::empty_input, "rel needs at least one judgment");
  std::size_t both = 0;
  for (std::size_t i = 0; i < g.size(); ++i) both += (g[i] != 0 && uni[i] != 0) ? 1 : 0;
  return static_cast<double>(both) / static_cast<double>(g.size());
}

MetricReport evaluate_dataset(const std::vector<Prediction>& preds, const Dataset& d, int k) {
  if (k < 1) raise(Errc::invalid_config, "k must be >= 1");
  std::unordered_map<std::string, const Instance*> by_id;
  for (const Instance& inst : d.instances) by_id.emplace(inst.item_id, &inst);

  std::unordered_map<std::string, const Prediction*> pred_by_id;
  for (const Prediction& pr : preds) {
    if (!by_id.count(pr.item_id))
      raise(Errc::unknown_item, "prediction for unknown item '" + pr.item_id + "'");
    if (!pred_by_id.emplace(pr.item_id, &pr).second)
      raise(Errc::invalid_config, "duplicate prediction for item '" + pr.item_id + "'");
  }

  MetricReport rep;
  rep.k = k;
  for (const Instance& inst : d.instances) {
    auto pit = pred_by_id.find(inst.item_id);
    if (pit == pred_by_id.end())
      raise(Errc::missing_prediction, "no prediction for item '" + inst.item_id + "'");
    KeyphraseSet gt = ground_truth_of(inst);
    if (gt.empty()) {
      ++rep.skipped_empty_gt;
      continue;
    }
    const Prediction& pr = *pit->second;
    InstanceMetrics m;
    m.item_id = inst.item_id;
    PrfTriple at_k = precision_recall_f1_at_k(pr, gt, k);
    PrfTriple at_o = f1_at_O(pr, gt);
    m.p_at_k = at_k.p;
    m.r_at_k = at_k.r;
    m.f1_at_k = at_k.f1;
    m.p_at_O = at_o.p;
    m.r_at_O = at_o.r;
    m.f1_at_O = at_o.f1;
    m.b_at_k = budget_accuracy_at_k(pr, gt, k);
    m.uniq_at_k = static_cast<double>(unique_k_at_k(pr, k));
    rep.per_instance.push_back(std::move(m));
  }
  rep.evaluated = rep.per_instance.size();
  if (rep.evaluated) {
    double n = static_cast<double>(rep.evaluated);
    for (const InstanceMetrics& m : rep.per_instance) {
      rep.p_at_k += m.p_at_k;
      rep.r_at_k += m.r_at_k;
      rep.f1_at_k += m.f1_at_k;
      rep.p_at_O += m.p_at_O;
      rep.r_at_O += m.r_at_O;
      rep.f1_at_O += m.f1_at_O;
      rep.b_at_k += m.b_at_k;
      rep.uniq_at_k += m.uniq_at_k;
    }
    rep.p_at_k /= n;
    rep.r_at_k /= n;
    rep.f1_at_k /= n;
    rep.p_at_O /= n;
    rep.r_at_O /= n;
    rep.f1_at_O /= n;
    rep.b_at_k /= n;
    rep.uniq_at_k /= n;
  }
  return rep;
}

}  // namespace oxmc
