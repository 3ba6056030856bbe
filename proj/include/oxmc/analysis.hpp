#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "oxmc/corpus.hpp"

namespace oxmc {

struct QuadrantReport {
  std::uint64_t hot_threshold = 5;      // interactions >= threshold -> hot
  std::uint64_t diverse_threshold = 5;  // unique labels >= threshold -> diverse
  std::size_t hot_diverse = 0;
  std::size_t hot_narrow = 0;
  std::size_t rare_narrow = 0;
  std::size_t rare_diverse = 0;
  // Proportions over all instances; zero on an empty dataset.
  double p_hot_diverse = 0, p_hot_narrow = 0, p_rare_narrow = 0, p_rare_diverse = 0;
};

struct ConcentrationReport {
  // (cumulative item fraction, cumulative keyphrase fraction), starts at (0,0), ends at (1,1).
  std::vector<std::pair<double, double>> lorenz_points;
  double gini = 0.0;
};

struct HistogramReport {
  std::map<std::size_t, std::size_t> counts;  // unique-label count -> instances
  double mean = 0.0;
  double cv = 0.0;  // 0 when undefined (empty data or zero mean)
};

// sigma/mu with population standard deviation.
// Throws EmptyInput on empty counts, ZeroMean when the mean is 0.
double coefficient_of_variation(const std::vector<std::uint64_t>& counts);

QuadrantReport quadrant_classify(const Dataset& d, std::uint64_t hot_threshold = 5,
                                 std::uint64_t diverse_threshold = 5);

// counts sorted ascending, cumulative-share curve, gini = 1 - 2 * trapezoid area.
// Throws EmptyInput on empty counts, AllZero when the total is 0.
ConcentrationReport lorenz_gini(const std::vector<std::uint64_t>& counts);

HistogramReport label_count_histogram(const Dataset& d);

}  // namespace oxmc
