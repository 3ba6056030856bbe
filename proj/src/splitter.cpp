#include "oxmc/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oxmc/rng.hpp"

namespace oxmc {

namespace {

// Largest-remainder apportionment. Ties on the fractional part go to the
// earlier split so the result is order-deterministic.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double target = static_cast<double>(n) * ratios[i];
    sizes[i] = static_cast<std::size_t>(std::floor(target));
    frac[i] = target - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t left = n - assigned, j = 0; left > 0; --left, ++j) sizes[order[j % 3]] += 1;
  return sizes;
}

}  // namespace

double mean_label_count(const Dataset& d) {
  if (d.empty()) return 0.0;
  std::size_t total = 0;
  for (const Instance& inst : d.instances) total += inst.labels.size();
  return static_cast<double>(total) / static_cast<double>(d.size());
}

DatasetSplits uniform_split(const Dataset& d, const SplitConfig& cfg) {
  double sum = cfg.ratios[0] + cfg.ratios[1] + cfg.ratios[2];
  if (cfg.ratios[0] < 0 || cfg.ratios[1] < 0 || cfg.ratios[2] < 0 || std::abs(sum - 1.0) > 1e-9)
    raise(Errc::invalid_config, "split ratios must be non-negative and sum to 1");
  if (d.empty()) raise(Errc::empty_dataset, "cannot split an empty dataset");

  // Defensive re-group: expanding and re-curating merges any same-text items
  // with exactly the curation ordering rules.
  Dataset grouped = curate(expand(d));

  std::vector<std::size_t> idx(grouped.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(derive_seed(cfg.seed, "split.shuffle"));
  rng.shuffle(idx);

  std::array<std::size_t, 3> sizes = split_sizes(grouped.size(), cfg.ratios);
  DatasetSplits out;
  Dataset* dst[3] = {&out.train, &out.dev, &out.test};
  const char* names[3] = {"train", "dev", "test"};
  std::size_t pos = 0;
  for (int s = 0; s < 3; ++s) {
    dst[s]->provenance = names[s];
    dst[s]->instances.reserve(sizes[s]);
    for (std::size_t j = 0; j < sizes[s]; ++j, ++pos)
      dst[s]->instances.push_back(grouped.instances[idx[pos]]);
  }
  return out;
}

std::map<std::size_t, Dataset> bucket_by_label_count(const Dataset& test) {
  std::map<std::size_t, Dataset> buckets;
  for (const Instance& inst : test.instances) {
    Dataset& b = buckets[inst.labels.size()];
    if (b.provenance.empty()) b.provenance = "test-bucket-" + std::to_string(inst.labels.size());
    b.instances.push_back(inst);
  }
  return buckets;
}

std::pair<Dataset, Dataset> aggregate_narrow_diverse(const std::map<std::size_t, Dataset>& buckets,
                                                     double mu) {
  if (!(mu > 0.0)) raise(Errc::zero_mean, "narrow/diverse boundary needs a positive mean");
  Dataset narrow, diverse;
  narrow.provenance = "test-narrow";
  diverse.provenance = "test-diverse";
  for (const auto& [k, bucket] : buckets) {
    Dataset& dst = (static_cast<double>(k) <= 2.0 * mu) ? narrow : diverse;
    dst.instances.insert(dst.instances.end(), bucket.instances.begin(), bucket.instances.end());
  }
  return {std::move(narrow), std::move(diverse)};
}

DatasetSplits make_splits(const Dataset& d, const SplitConfig& cfg) {
  DatasetSplits s = uniform_split(d, cfg);
  s.mu_train = mean_label_count(s.train);
  s.test_buckets = bucket_by_label_count(s.test);
  if (!s.test.empty()) {
    auto [narrow, diverse] = aggregate_narrow_diverse(s.test_buckets, s.mu_train);
    s.test_narrow = std::move(narrow);
    s.test_diverse = std::move(diverse);
  } else {
    s.test_narrow.provenance = "test-narrow";
    s.test_diverse.provenance = "test-diverse";
  }
  return s;
}

}  // namespace oxmc
