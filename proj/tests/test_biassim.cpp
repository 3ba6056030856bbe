#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <unordered_map>

#include "oxmc/analysis.hpp"
#include "oxmc/biassim.hpp"
#include "oxmc/splitter.hpp"

using namespace oxmc;

namespace {

UniverseConfig small_cfg() {
  UniverseConfig cfg;
  cfg.num_items = 50;
  cfg.min_labels = 1;
  cfg.max_labels = 6;
  cfg.mean_labels = 3.0;
  cfg.vocab_words = 12;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("universe generation is a pure function of its configuration") {
  UniverseConfig cfg = small_cfg();
  Universe a = generate_universe(cfg);
  Universe b = generate_universe(cfg);
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    CHECK(a.items[i].item_id == b.items[i].item_id);
    CHECK(a.items[i].text == b.items[i].text);
    CHECK(a.items[i].true_labels == b.items[i].true_labels);
    CHECK(a.items[i].weight == b.items[i].weight);
  }
  cfg.seed = 43;
  Universe c = generate_universe(cfg);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    any_diff = any_diff || a.items[i].true_labels != c.items[i].true_labels ||
               a.items[i].text != c.items[i].text;
  CHECK(any_diff);
}

TEST_CASE("universe items look structurally sound") {
  UniverseConfig cfg = small_cfg();
  Universe u = generate_universe(cfg);
  std::set<std::string> ids;
  double weight_sum = 0.0;
  for (const UniverseItem& item : u.items) {
    CHECK(ids.insert(item.item_id).second);
    CHECK(item.true_labels.size() >= cfg.min_labels);
    CHECK(item.true_labels.size() <= cfg.max_labels);
    std::set<Keyphrase> dedup(item.true_labels.begin(), item.true_labels.end());
    CHECK(dedup.size() == item.true_labels.size());
    CHECK(!item.text.empty());
    weight_sum += item.weight;
  }
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-9));
  // popularity declines with rank when the skew exponent is positive
  for (std::size_t i = 1; i < u.items.size(); ++i)
    CHECK(u.items[i - 1].weight > u.items[i].weight);
}

TEST_CASE("zero skew gives every item the same popularity") {
  UniverseConfig cfg = small_cfg();
  cfg.zipf_s = 0.0;
  Universe u = generate_universe(cfg);
  for (const UniverseItem& item : u.items)
    CHECK(item.weight == doctest::Approx(1.0 / double(cfg.num_items)).epsilon(1e-12));
}

TEST_CASE("label counts hit the configured extremes and mean") {
  UniverseConfig cfg;
  cfg.num_items = 1000;
  cfg.min_labels = 1;
  cfg.max_labels = 15;
  cfg.mean_labels = 8.0;
  cfg.vocab_words = 60;
  cfg.seed = 7;
  Universe u = generate_universe(cfg);
  double mean = 0.0;
  for (const UniverseItem& item : u.items) mean += double(item.true_labels.size());
  mean /= double(u.items.size());
  CHECK(mean == doctest::Approx(8.0).epsilon(0.1));

  cfg.min_labels = cfg.max_labels = 4;
  cfg.mean_labels = 4.0;
  Universe fixed = generate_universe(cfg);
  for (const UniverseItem& item : fixed.items) CHECK(item.true_labels.size() == 4);

  cfg.num_items = 1;
  Universe single = generate_universe(cfg);
  CHECK(single.items.size() == 1);
  CHECK(single.items[0].weight == doctest::Approx(1.0));
}

TEST_CASE("universe configuration is validated") {
  UniverseConfig cfg = small_cfg();
  cfg.num_items = 0;
  CHECK_THROWS_AS(generate_universe(cfg), Error);
  cfg = small_cfg();
  cfg.min_labels = 0;
  CHECK_THROWS_AS(generate_universe(cfg), Error);
  cfg = small_cfg();
  cfg.max_labels = 37;  // beyond the per-category pool
  CHECK_THROWS_AS(generate_universe(cfg), Error);
  cfg = small_cfg();
  cfg.mean_labels = 0.5;  // below min
  CHECK_THROWS_AS(generate_universe(cfg), Error);
  cfg = small_cfg();
  cfg.vocab_words = 5;
  CHECK_THROWS_AS(generate_universe(cfg), Error);
  cfg = small_cfg();
  cfg.zipf_s = -1.0;
  CHECK_THROWS_AS(generate_universe(cfg), Error);
}

TEST_CASE("annotations draw real labels of real items, reproducibly") {
  Universe u = generate_universe(small_cfg());
  std::vector<InteractionRecord> r1 = simulate_annotations(u, 500, 9);
  std::vector<InteractionRecord> r2 = simulate_annotations(u, 500, 9);
  REQUIRE(r1.size() == 500);
  REQUIRE(r2.size() == 500);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].item_id == r2[i].item_id);
    CHECK(r1[i].keyphrase == r2[i].keyphrase);
    CHECK(r1[i].frequency == 1);
  }
  std::unordered_map<std::string, const UniverseItem*> by_id;
  for (const UniverseItem& item : u.items) by_id.emplace(item.item_id, &item);
  for (const InteractionRecord& rec : r1) {
    REQUIRE(by_id.count(rec.item_id) == 1);
    const UniverseItem* item = by_id[rec.item_id];
    CHECK(rec.item_text == item->text);
    bool is_true_label = false;
    for (const Keyphrase& kp : item->true_labels) is_true_label |= kp.render() == rec.keyphrase;
    CHECK(is_true_label);
  }
  CHECK_THROWS_AS(simulate_annotations(u, 0, 9), Error);
}

TEST_CASE("popularity skew concentrates annotations on head items") {
  UniverseConfig cfg = small_cfg();
  cfg.num_items = 200;
  auto interaction_cv = [&](double s) {
    cfg.zipf_s = s;
    Universe u = generate_universe(cfg);
    std::unordered_map<std::string, std::uint64_t> per_item;
    for (const InteractionRecord& rec : simulate_annotations(u, 4000, 5)) ++per_item[rec.item_id];
    std::vector<std::uint64_t> counts;
    for (const UniverseItem& item : u.items) {
      auto it = per_item.find(item.item_id);
      counts.push_back(it == per_item.end() ? 0 : it->second);
    }
    return coefficient_of_variation(counts);
  };
  CHECK(interaction_cv(1.1) > interaction_cv(0.0));
}

TEST_CASE("exhaustive annotation eventually observes every true label") {
  UniverseConfig cfg;
  cfg.num_items = 3;
  cfg.min_labels = 1;
  cfg.max_labels = 4;
  cfg.mean_labels = 2.5;
  cfg.vocab_words = 12;
  cfg.zipf_s = 0.0;  // uniform, so no item is starved
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    Universe u = generate_universe(cfg);
    Dataset d = curate(simulate_annotations(u, 2000, seed));
    REQUIRE(d.size() == 3);
    for (const Instance& inst : d.instances) {
      const UniverseItem* item = nullptr;
      for (const UniverseItem& cand : u.items)
        if (cand.item_id == inst.item_id) item = &cand;
      REQUIRE(item != nullptr);
      std::set<Keyphrase> observed;
      for (const LabelEntry& le : inst.labels) observed.insert(le.kp);
      std::set<Keyphrase> truth(item->true_labels.begin(), item->true_labels.end());
      CHECK(observed == truth);
      CHECK(inst.text == item->text);
    }
  }
}

TEST_CASE("sparse annotation underestimates label sets") {
  UniverseConfig cfg;
  cfg.num_items = 400;
  cfg.min_labels = 1;
  cfg.max_labels = 15;
  cfg.mean_labels = 8.0;
  cfg.vocab_words = 24;
  cfg.seed = 3;
  Universe u = generate_universe(cfg);
  Dataset d = curate(simulate_annotations(u, 1200, 3));  // ~3 interactions per item
  double observed_mean = mean_label_count(d);
  CHECK(observed_mean < 8.0 * 0.6);  // far below the true mean of 8
}

TEST_CASE("coverage scores known-answer cases") {
  Universe u;
  u.items.push_back({"i1", "t1", {normalize_keyphrase("a"), normalize_keyphrase("b")}, 0.5});
  u.items.push_back({"i2", "t2", {normalize_keyphrase("c")}, 0.5});

  std::vector<Prediction> perfect{{"i1", {normalize_keyphrase("a"), normalize_keyphrase("b")}},
                                  {"i2", {normalize_keyphrase("c")}}};
  CHECK(coverage(u, perfect, 5) == doctest::Approx(1.0));

  std::vector<Prediction> empty{{"i1", {}}, {"i2", {}}};
  CHECK(coverage(u, empty, 5) == doctest::Approx(0.0));

  // i1 finds one of two labels, i2 misses; duplicates collapse before the cut
  std::vector<Prediction> partial{
      {"i1", {normalize_keyphrase("a"), normalize_keyphrase("a"), normalize_keyphrase("x")}},
      {"i2", {normalize_keyphrase("x"), normalize_keyphrase("c")}}};
  CHECK(coverage(u, partial, 2) == doctest::Approx((0.5 + 1.0) / 2.0));
  CHECK(coverage(u, partial, 1) == doctest::Approx((0.5 + 0.0) / 2.0));

  std::vector<Prediction> stray{{"i1", {}}, {"i2", {}}, {"zz", {}}};
  CHECK_THROWS_AS(coverage(u, stray, 2), Error);
  std::vector<Prediction> missing{{"i1", {}}};
  CHECK_THROWS_AS(coverage(u, missing, 2), Error);
  CHECK_THROWS_AS(coverage(u, perfect, 0), Error);
}

TEST_CASE("universe files round-trip") {
  Universe u = generate_universe(small_cfg());
  std::filesystem::path p = std::filesystem::temp_directory_path() / "oxmc_test_universe.jsonl";
  write_universe(u, p);
  Universe back = read_universe(p);
  REQUIRE(back.items.size() == u.items.size());
  for (std::size_t i = 0; i < u.items.size(); ++i) {
    CHECK(back.items[i].item_id == u.items[i].item_id);
    CHECK(back.items[i].text == u.items[i].text);
    CHECK(back.items[i].true_labels == u.items[i].true_labels);
    CHECK(back.items[i].weight == doctest::Approx(u.items[i].weight).epsilon(1e-12));
  }
  std::filesystem::remove(p);
}
