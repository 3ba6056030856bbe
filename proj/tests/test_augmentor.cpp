#include <doctest.h>

#include <algorithm>
#include <set>

#include "oxmc/augmentor.hpp"
#include "oxmc/rng.hpp"
#include "oxmc/splitter.hpp"

using namespace oxmc;

namespace {

Instance labeled_instance(std::string id, std::string text, std::initializer_list<const char*> kps) {
  Instance inst{std::move(id), std::move(text), {}, 0};
  for (const char* kp : kps) {
    inst.labels.push_back({normalize_keyphrase(kp), 1});
    inst.total_interactions += 1;
  }
  return inst;
}

Vocab letters_vocab() {
  std::vector<std::string> tokens{"<pad>", "<unk>", "<bos>", "<eos>", "<sep>", "<bok>", "<eok>",
                                  "t",     "a",     "b",     "c",     "d"};
  return Vocab::from_tokens(std::move(tokens));
}

// Scorer whose spans emit the given single-word labels after text "t".
NgramScorer span_model(const Vocab& v, std::initializer_list<const char*> labels) {
  NgramScorer m(v, 3, 1e-9);
  std::vector<TokenId> seq{tok::BOS, v.id_of("t"), tok::SEP};
  for (const char* w : labels) {
    seq.push_back(tok::BOK);
    seq.push_back(v.id_of(w));
    seq.push_back(tok::EOK);
  }
  for (int i = 0; i < 5; ++i) m.add_sequence(seq);
  return m;
}

}  // namespace

TEST_CASE("diverse selection keeps strictly-above-mean instances only") {
  Dataset d;
  d.instances.push_back(labeled_instance("i1", "t", {"a"}));
  d.instances.push_back(labeled_instance("i2", "t", {"a", "b"}));
  d.instances.push_back(labeled_instance("i3", "t", {"a", "b", "c"}));
  d.instances.push_back(labeled_instance("i4", "t", {"a", "b", "c", "d"}));
  Dataset sel = select_train_diverse(d, 2.5);
  REQUIRE(sel.size() == 2);
  CHECK(sel.instances[0].item_id == "i3");
  CHECK(sel.instances[1].item_id == "i4");
  // a count exactly at the mean stays out
  Dataset at_mean = select_train_diverse(d, 2.0);
  for (const Instance& inst : at_mean.instances) CHECK(inst.unique_label_count() > 2);
  CHECK_THROWS_AS(select_train_diverse(d, 0.0), Error);
}

TEST_CASE("augmentation injects novel zero-frequency labels and accepts above the mean") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a", "b", "c", "d"});
  Instance inst = labeled_instance("i1", "t", {"a", "b"});
  AugmentationConfig cfg;
  cfg.target_mean = 2.5;
  cfg.samples_per_item = 6;
  cfg.seed = 11;
  std::optional<Instance> out = augment_instance(inst, model, cfg);
  REQUIRE(out.has_value());
  CHECK(out->unique_label_count() > 2.5);
  // observed labels survive in front, generated ones carry frequency 0
  REQUIRE(out->labels.size() >= 3);
  CHECK(out->labels[0].kp.render() == "a");
  CHECK(out->labels[1].kp.render() == "b");
  std::set<std::string> seen;
  for (const LabelEntry& le : out->labels) {
    CHECK(seen.insert(le.kp.render()).second);  // merged list stays deduplicated
    if (le.kp.render() != "a" && le.kp.render() != "b") CHECK(le.frequency == 0);
  }
}

TEST_CASE("augmentation rejects when even perfect samples cannot clear the mean") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a", "b", "c", "d"});
  Instance inst = labeled_instance("i1", "t", {"a", "b"});
  AugmentationConfig cfg;
  cfg.target_mean = 3.5;
  cfg.samples_per_item = 1;  // merged count tops out at 3
  CHECK_FALSE(augment_instance(inst, model, cfg).has_value());
  cfg.samples_per_item = 0;
  CHECK_THROWS_AS(augment_instance(inst, model, cfg), Error);
}

TEST_CASE("augmentation rejects when samples only duplicate observed labels") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a"});  // can realistically emit only "a"
  Instance inst = labeled_instance("i1", "t", {"a"});
  AugmentationConfig cfg;
  cfg.target_mean = 1.5;
  cfg.samples_per_item = 3;
  cfg.seed = 5;
  CHECK_FALSE(augment_instance(inst, model, cfg).has_value());
}

TEST_CASE("accepted augmentations always clear the target mean") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a", "b", "c"});
  Rng rng(313);
  const char* names[] = {"a", "b", "c", "d"};
  for (int round = 0; round < 500; ++round) {
    Instance inst{"i" + std::to_string(round), "t", {}, 0};
    std::size_t n = 1 + rng.bounded(3);
    for (std::size_t j = 0; j < n; ++j) {
      Keyphrase kp = normalize_keyphrase(names[j]);
      inst.labels.push_back({kp, 1});
      inst.total_interactions += 1;
    }
    AugmentationConfig cfg;
    cfg.target_mean = 0.5 + rng.next_double() * 4.0;
    cfg.samples_per_item = 1 + int(rng.bounded(5));
    cfg.seed = rng.next_u64();
    std::optional<Instance> out = augment_instance(inst, model, cfg);
    if (out.has_value()) {
      CHECK(double(out->unique_label_count()) > cfg.target_mean);
      CHECK(out->labels.size() >= inst.labels.size());
    } else {
      // rejection only happens when the merged count failed the bar
      CHECK(double(inst.unique_label_count()) <= cfg.target_mean);
    }
  }
}

TEST_CASE("post-train set construction raises the mean and respects the cap") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a", "b", "c", "d"});
  Dataset d;
  d.instances.push_back(labeled_instance("i1", "t", {"a"}));
  d.instances.push_back(labeled_instance("i2", "t", {"b"}));
  d.instances.push_back(labeled_instance("i3", "t", {"a", "b", "c", "d"}));
  double original_mean = mean_label_count(d);  // 2.0

  AugmentationConfig cfg;
  cfg.samples_per_item = 6;
  cfg.seed = 21;
  PosttrainResult out = build_posttrain_set(d, model, cfg);
  REQUIRE(!out.data.empty());
  CHECK(mean_label_count(out.data) > original_mean);

  std::set<std::string> ids;
  for (const Instance& inst : out.data.instances) {
    CHECK(ids.insert(inst.item_id).second);
    REQUIRE(out.provenance.count(inst.item_id) == 1);
    const std::string& origin = out.provenance.at(inst.item_id);
    if (inst.item_id == "i3") {
      CHECK(origin == "original");
      CHECK(inst == d.instances[2]);  // kept untouched
    } else {
      CHECK(origin == "augmented");
      CHECK(double(inst.unique_label_count()) > original_mean);
    }
  }

  cfg.max_output_size = 1;
  PosttrainResult capped = build_posttrain_set(d, model, cfg);
  CHECK(capped.data.size() == 1);
  cfg.max_output_size = 0;
  CHECK_THROWS_AS(build_posttrain_set(d, model, cfg), Error);
}

TEST_CASE("post-train construction is reproducible per seed") {
  Vocab v = letters_vocab();
  NgramScorer model = span_model(v, {"a", "b", "c"});
  Dataset d;
  d.instances.push_back(labeled_instance("i1", "t", {"a"}));
  d.instances.push_back(labeled_instance("i2", "t", {"b", "c"}));
  AugmentationConfig cfg;
  cfg.seed = 99;
  PosttrainResult r1 = build_posttrain_set(d, model, cfg);
  PosttrainResult r2 = build_posttrain_set(d, model, cfg);
  REQUIRE(r1.data.size() == r2.data.size());
  for (std::size_t i = 0; i < r1.data.size(); ++i) CHECK(r1.data.instances[i] == r2.data.instances[i]);
  CHECK(r1.provenance == r2.provenance);
}
