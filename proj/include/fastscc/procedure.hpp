#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fastscc/cluster.hpp"
#include "fastscc/padjust.hpp"
#include "fastscc/rank_tests.hpp"
#include "fastscc/survival.hpp"

namespace fastscc {

struct ProcedureConfig {
  WeightScheme weights;
  CorrectionMethod correction = CorrectionMethod::Bonferroni;
  int grid_points = 50;
  ClusterConfig cluster;
};

struct ClusterTestResult {
  int K = 0;
  Partition partition;
  std::vector<double> raw_p;       // one per multi-member group, group order
  std::vector<double> adjusted_p;  // same length
  double final_p = 1.0;
  int tested_groups = 0;
};

struct KSelectionResult {
  int chosen_K = 1;
  std::vector<ClusterTestResult> trajectory;
  double alpha = 0.05;
};

namespace detail {

inline std::vector<GridCurve> grid_curves(
    const std::vector<PopulationSample>& samples, int grid_points) {
  auto grid =
      std::make_shared<const TimeGrid>(common_grid(samples, grid_points));
  std::vector<GridCurve> curves;
  curves.reserve(samples.size());
  for (const auto& s : samples)
    curves.push_back(evaluate_on_grid(kaplan_meier(s), grid));
  return curves;
}

}  // namespace detail

// Test of H0(K): KM curves on a common grid, k-means partition into K
// groups, within-group log-rank tests, correction over the produced
// p-values, final p = minimum of the adjusted ones. Singleton groups are
// vacuous and do not count toward the multiplicity.
inline ClusterTestResult test_h0k(const std::vector<PopulationSample>& samples,
                                  int k, const ProcedureConfig& config) {
  const int j_total = static_cast<int>(samples.size());
  if (k < 1 || k > j_total)
    throw std::invalid_argument("test_h0k: K out of range");

  const auto curves = detail::grid_curves(samples, config.grid_points);
  const auto clustered = cluster(curves, k, config.cluster);

  ClusterTestResult result;
  result.K = k;
  result.partition = clustered.partition;

  for (const auto& members : clustered.partition.groups()) {
    if (members.size() < 2) continue;
    std::vector<PopulationSample> group;
    group.reserve(members.size());
    for (std::size_t j : members) group.push_back(samples[j]);
    result.raw_p.push_back(weighted_logrank(group, config.weights).p_value);
  }
  result.tested_groups = static_cast<int>(result.raw_p.size());
  if (result.tested_groups == 0) {
    result.final_p = 1.0;
    return result;
  }
  result.adjusted_p = adjust(result.raw_p, config.correction);
  result.final_p =
      *std::min_element(result.adjusted_p.begin(), result.adjusted_p.end());
  return result;
}

// Sequential selection: K = 1, 2, ... until H0(K) is not rejected. K = J
// always terminates (all groups singletons, final p = 1).
inline KSelectionResult select_k(const std::vector<PopulationSample>& samples,
                                 double alpha, const ProcedureConfig& config,
                                 int k_max = 0) {
  if (samples.empty()) throw std::invalid_argument("select_k: no populations");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("select_k: alpha must be in (0,1)");
  const int j_total = static_cast<int>(samples.size());
  if (k_max <= 0 || k_max > j_total) k_max = j_total;

  KSelectionResult result;
  result.alpha = alpha;
  if (j_total == 1) {
    result.chosen_K = 1;
    return result;
  }
  for (int k = 1; k <= k_max; ++k) {
    auto step = test_h0k(samples, k, config);
    const double final_p = step.final_p;
    result.trajectory.push_back(std::move(step));
    result.chosen_K = k;
    if (final_p >= alpha) break;
  }
  return result;
}

}  // namespace fastscc
