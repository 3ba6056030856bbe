#include "oxmc/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace oxmc {

double coefficient_of_variation(const std::vector<std::uint64_t>& counts) {
  if (counts.empty()) raise(Errc::empty_input, "coefficient of variation needs at least one count");
  double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (std::uint64_t c : counts) mean += static_cast<double>(c);
  mean /= n;
  if (mean == 0.0) raise(Errc::zero_mean, "coefficient of variation undefined for zero mean");
  double var = 0.0;
  for (std::uint64_t c : counts) {
    double dv = static_cast<double>(c) - mean;
    var += dv * dv;
  }
  var /= n;  // population variance
  return std::sqrt(var) / mean;
}

QuadrantReport quadrant_classify(const Dataset& d, std::uint64_t hot_threshold,
                                 std::uint64_t diverse_threshold) {
  QuadrantReport r;
  r.hot_threshold = hot_threshold;
  r.diverse_threshold = diverse_threshold;
  for (const Instance& inst : d.instances) {
    bool hot = inst.total_interactions >= hot_threshold;
    bool diverse = inst.unique_label_count() >= diverse_threshold;
    if (hot && diverse)
      ++r.hot_diverse;
    else if (hot)
      ++r.hot_narrow;
    else if (diverse)
      ++r.rare_diverse;
    else
      ++r.rare_narrow;
  }
  if (!d.empty()) {
    double n = static_cast<double>(d.size());
    r.p_hot_diverse = static_cast<double>(r.hot_diverse) / n;
    r.p_hot_narrow = static_cast<double>(r.hot_narrow) / n;
    r.p_rare_narrow = static_cast<double>(r.rare_narrow) / n;
    r.p_rare_diverse = static_cast<double>(r.rare_diverse) / n;
  }
  return r;
}

ConcentrationReport lorenz_gini(const std::vector<std::uint64_t>& counts) {
  if (counts.empty()) raise(Errc::empty_input, "lorenz curve needs at least one count");
  std::vector<std::uint64_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  long double total = 0;
  for (std::uint64_t c : sorted) total += c;
  if (total == 0) raise(Errc::all_zero, "lorenz curve undefined when all counts are zero");

  ConcentrationReport rep;
  rep.lorenz_points.reserve(sorted.size() + 1);
  rep.lorenz_points.emplace_back(0.0, 0.0);
  long double cum = 0;
  double n = static_cast<double>(sorted.size());
  long double area = 0;
  double prev_x = 0.0, prev_y = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    double x = static_cast<double>(i + 1) / n;
    double y = static_cast<double>(cum / total);
    area += static_cast<long double>(x - prev_x) * (prev_y + y) / 2.0L;
    rep.lorenz_points.emplace_back(x, y);
    prev_x = x;
    prev_y = y;
  }
  rep.gini = static_cast<double>(1.0L - 2.0L * area);
  return rep;
}

HistogramReport label_count_histogram(const Dataset& d) {
  HistogramReport rep;
  std::vector<std::uint64_t> counts;
  counts.reserve(d.size());
  for (const Instance& inst : d.instances) {
    ++rep.counts[inst.unique_label_count()];
    counts.push_back(inst.unique_label_count());
  }
  if (!counts.empty()) {
    double total = 0;
    for (std::uint64_t c : counts) total += static_cast<double>(c);
    rep.mean = total / static_cast<double>(counts.size());
    if (rep.mean > 0.0) rep.cv = coefficient_of_variation(counts);
  }
  return rep;
}

}  // namespace oxmc
