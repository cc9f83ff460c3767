#include "fasemcom/power.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fasemcom/errors.hpp"

namespace fasemcom {

PatchPowerPlan allocate_power(std::vector<int> levels, double beta, double p_total) {
  if (levels.empty()) fail(Errc::invalid_level, "allocate_power with no levels");
  for (int l : levels)
    if (l < 1) fail(Errc::invalid_level, "level " + std::to_string(l) + " below 1");
  if (!(p_total > 0.0)) fail(Errc::non_positive_budget, "total power must be positive");
  if (!(beta >= 0.0)) fail(Errc::non_positive_budget, "beta must be >= 0");

  // One pow per distinct level, and a denominator accumulated in level
  // order: equal levels get bit-identical powers and permuting the input
  // permutes the output exactly.
  std::map<int, std::pair<double, long long>> by_level;  // level -> (weight, count)
  for (int l : levels) {
    auto [it, inserted] = by_level.try_emplace(l, 0.0, 0);
    if (inserted) it->second.first = std::pow(double(l), beta);
    ++it->second.second;
  }
  double denom = 0.0;
  for (const auto& [l, wc] : by_level) denom += wc.first * double(wc.second);

  PatchPowerPlan plan;
  plan.levels = std::move(levels);
  plan.beta = beta;
  plan.p_total = p_total;
  plan.powers.resize(plan.levels.size());
  // w*P/denom keeps integer-exact cases (e.g. 30/5) exact.
  for (std::size_t i = 0; i < plan.powers.size(); ++i)
    plan.powers[i] = by_level.find(plan.levels[i])->second.first * p_total / denom;
  return plan;
}

PatchPowerPlan allocate_power(const PatchWeights& weights, double beta, double p_total) {
  if (weights.levels.empty())
    fail(Errc::invalid_level, "allocate_power needs quantized weights");
  PatchPowerPlan plan = allocate_power(weights.levels, beta, p_total);
  plan.grid = weights.grid;
  return plan;
}

double boost_ratio(const PatchPowerPlan& plan) {
  if (plan.powers.empty()) fail(Errc::invalid_level, "boost_ratio of an empty plan");
  auto [mn, mx] = std::minmax_element(plan.powers.begin(), plan.powers.end());
  return *mx / *mn;
}

}  // namespace fasemcom
