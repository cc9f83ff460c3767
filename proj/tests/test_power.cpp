#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fasemcom/errors.hpp"
#include "fasemcom/power.hpp"
#include "fasemcom/rng.hpp"

using namespace fasemcom;

TEST_CASE("reference allocations") {
  const PatchPowerPlan plan = allocate_power(std::vector<int>{1, 2, 2}, 1.0, 30.0);
  CHECK(plan.powers[0] == 6.0);
  CHECK(plan.powers[1] == 12.0);
  CHECK(plan.powers[2] == 12.0);

  const PatchPowerPlan flat = allocate_power(std::vector<int>{3, 1, 4, 1, 5}, 0.0, 30.0);
  for (double p : flat.powers) CHECK(p == 6.0);

  const PatchPowerPlan sharp = allocate_power(std::vector<int>{1, 5}, 2.0, 30.0);
  CHECK(sharp.powers[0] == doctest::Approx(30.0 / 26.0).epsilon(1e-12));
  CHECK(sharp.powers[1] == doctest::Approx(750.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("allocation rejects bad input") {
  CHECK_THROWS_WITH_AS(static_cast<void>(allocate_power(std::vector<int>{1, 0}, 1.0, 30.0)),
                       doctest::Contains("InvalidLevel"), Error);
  CHECK_THROWS_AS(static_cast<void>(allocate_power(std::vector<int>{}, 1.0, 30.0)), Error);
  CHECK_THROWS_WITH_AS(static_cast<void>(allocate_power(std::vector<int>{1, 2}, 1.0, 0.0)),
                       doctest::Contains("NonPositiveBudget"), Error);
  CHECK_THROWS_AS(static_cast<void>(allocate_power(std::vector<int>{1, 2}, -1.0, 30.0)),
                  Error);
}

TEST_CASE("boost ratios") {
  CHECK(boost_ratio(allocate_power(std::vector<int>{3, 3, 3}, 2.0, 30.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boost_ratio(allocate_power(std::vector<int>{1, 5}, 1.0, 30.0)) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(boost_ratio(allocate_power(std::vector<int>{1, 5}, 4.0, 30.0)) ==
        doctest::Approx(625.0).epsilon(1e-12));
}

TEST_CASE("budget conservation and ratio law over random instances") {
  RngStream rng(41);
  for (int iter = 0; iter < 500; ++iter) {
    const int n = 1 + int(rng.next_u64() % 1024);
    const double beta = rng.next_double() * 8.0;
    const double p_total = 0.1 + rng.next_double() * 99.9;
    std::vector<int> levels(n);
    for (int& l : levels) l = 1 + int(rng.next_u64() % 9);

    const PatchPowerPlan plan = allocate_power(levels, beta, p_total);
    const double sum = std::accumulate(plan.powers.begin(), plan.powers.end(), 0.0);
    CHECK(std::abs(sum - p_total) <= 1e-9 * p_total);

    const std::size_t i = rng.next_u64() % n, j = rng.next_u64() % n;
    const double expected = std::pow(double(levels[i]) / levels[j], beta);
    CHECK(std::abs(plan.powers[i] / plan.powers[j] - expected) <= 1e-9 * expected);
  }
}

TEST_CASE("power gap between levels is nondecreasing in beta") {
  RngStream rng(43);
  for (int iter = 0; iter < 100; ++iter) {
    const int n = 2 + int(rng.next_u64() % 64);
    std::vector<int> levels(n);
    for (int& l : levels) l = 1 + int(rng.next_u64() % 5);
    std::size_t hi = 0, lo = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] > levels[hi]) hi = k;
      if (levels[k] < levels[lo]) lo = k;
    }
    if (levels[hi] == levels[lo]) continue;

    double prev_gap = -1.0;
    for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const PatchPowerPlan plan = allocate_power(levels, beta, 30.0);
      const double gap = plan.powers[hi] - plan.powers[lo];
      CHECK(gap >= prev_gap - 1e-12);
      prev_gap = gap;
    }
  }
}

TEST_CASE("permuting levels permutes powers") {
  RngStream rng(47);
  std::vector<int> levels(32);
  for (int& l : levels) l = 1 + int(rng.next_u64() % 5);
  const PatchPowerPlan base = allocate_power(levels, 1.7, 30.0);

  std::vector<std::size_t> perm(levels.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t k = perm.size(); k > 1; --k)
    std::swap(perm[k - 1], perm[rng.next_u64() % k]);

  std::vector<int> shuffled(levels.size());
  for (std::size_t k = 0; k < perm.size(); ++k) shuffled[k] = levels[perm[k]];
  const PatchPowerPlan permuted = allocate_power(shuffled, 1.7, 30.0);
  for (std::size_t k = 0; k < perm.size(); ++k)
    CHECK(permuted.powers[k] == base.powers[perm[k]]);
}

TEST_CASE("plans built from quantized weights carry the grid") {
  PatchWeights w;
  w.grid = make_grid(4, 2);
  w.raw = {0.0, 0.5, 0.25, 1.0};
  w = quantize_levels(std::move(w), 5);
  const PatchPowerPlan plan = allocate_power(w, 1.0, 30.0);
  CHECK(plan.grid == w.grid);
  CHECK(plan.levels == w.levels);
}
