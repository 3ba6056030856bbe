#include "oxmc/augmentor.hpp"

#include <algorithm>
#include <set>

#include "oxmc/metrics.hpp"
#include "oxmc/rng.hpp"
#include "oxmc/splitter.hpp"

namespace oxmc {

Dataset select_train_diverse(const Dataset& d, double mean) {
  if (!(mean > 0.0)) raise(Errc::zero_mean, "diverse selection needs a positive mean");
  Dataset out;
  out.provenance = "train-diverse";
  for (const Instance& inst : d.instances)
    if (static_cast<double>(inst.unique_label_count()) > mean) out.instances.push_back(inst);
  return out;
}

std::optional<Instance> augment_instance(const Instance& inst, const NgramScorer& model,
                                         const AugmentationConfig& cfg) {
  if (cfg.samples_per_item < 1) raise(Errc::invalid_config, "samples_per_item must be >= 1");
  DecodeRequest req;
  req.paradigm = Paradigm::pusl;
  req.k = cfg.samples_per_item;
  req.mode = DecodeMode::sampled;
  req.temperature = cfg.temperature;
  req.seed = derive_seed(cfg.seed, "augment." + inst.item_id);
  req.max_tokens_per_kp = cfg.max_tokens_per_kp;
  req.max_total_tokens = cfg.max_total_tokens;
  req.max_text_tokens = cfg.max_text_tokens;
  DecodeResult dec = decode_pusl_topk(model, inst.text, req);

  KeyphraseSet have = ground_truth_of(inst);
  Instance merged = inst;
  for (const Keyphrase& kp : dedup_keyphrases(dec.keyphrases)) {
    if (have.count(kp)) continue;
    have.insert(kp);
    merged.labels.push_back({kp, 0});  // frequency 0 marks a generated label
  }
  if (static_cast<double>(merged.unique_label_count()) > cfg.target_mean) return merged;
  return std::nullopt;
}

PosttrainResult build_posttrain_set(const Dataset& d, const NgramScorer& model,
                                    const AugmentationConfig& cfg) {
  if (cfg.max_output_size < 1) raise(Errc::invalid_config, "max_output_size must be >= 1");
  AugmentationConfig resolved = cfg;
  if (!(resolved.target_mean > 0.0)) resolved.target_mean = mean_label_count(d);

  PosttrainResult out;
  out.data.provenance = "posttrain";
  std::vector<std::string> origin;  // parallel to out.data.instances pre-shuffle
  for (const Instance& inst : d.instances) {
    if (static_cast<double>(inst.unique_label_count()) > resolved.target_mean) {
      out.data.instances.push_back(inst);
      origin.push_back("original");
    } else if (std::optional<Instance> aug = augment_instance(inst, model, resolved)) {
      out.data.instances.push_back(std::move(*aug));
      origin.push_back("augmented");
    }
  }

  std::vector<std::size_t> idx(out.data.instances.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(derive_seed(resolved.seed, "posttrain.shuffle"));
  rng.shuffle(idx);
  if (idx.size() > resolved.max_output_size) idx.resize(resolved.max_output_size);

  Dataset final;
  final.provenance = out.data.provenance;
  for (std::size_t i : idx) {
    final.instances.push_back(std::move(out.data.instances[i]));
    out.provenance.emplace(final.instances.back().item_id, origin[i]);
  }
  out.data = std::move(final);
  return out;
}

}  // namespace oxmc
