#pragma once

#include <vector>

#include "fasemcom/attention.hpp"
#include "fasemcom/geometry.hpp"

namespace fasemcom {

struct PatchPowerPlan {
  PatchGrid grid;  // default-constructed when allocated from bare levels
  std::vector<int> levels;
  double beta = 0.0;
  double p_total = 0.0;
  std::vector<double> powers;  // watts, sums to p_total
};

/// powers[i] = levels[i]^beta * p_total / sum_j levels[j]^beta.
/// beta = 0 gives the uniform split regardless of levels. Throws
/// invalid_level for empty input or any level < 1, non_positive_budget
/// for p_total <= 0 (or beta < 0).
PatchPowerPlan allocate_power(std::vector<int> levels, double beta, double p_total);
PatchPowerPlan allocate_power(const PatchWeights& weights, double beta, double p_total);

/// max(powers)/min(powers) = (max level present / min level present)^beta.
double boost_ratio(const PatchPowerPlan& plan);

}  // namespace fasemcom
