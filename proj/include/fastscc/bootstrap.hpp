#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fastscc/cluster.hpp"
#include "fastscc/procedure.hpp"
#include "fastscc/rng.hpp"
#include "fastscc/survival.hpp"

namespace fastscc {

// Bootstrap-resampling baseline: sup-distance-to-centroid statistic with
// within-group pooled resampling. Stands in for the resampling-based
// reference method; used for timing and concordance comparisons.
struct BootstrapConfig {
  int B = 500;
  std::uint64_t seed = 0;
  ClusterConfig cluster;
  int grid_points = 50;
};

struct BaselineResult {
  int K = 0;
  Partition partition;
  double statistic = 0.0;
  std::vector<double> boot_statistics;
  double p_value = 1.0;
};

namespace detail {

// Max over groups of the sup over grid points of |curve - group centroid|.
inline double sup_centroid_distance(const std::vector<GridCurve>& curves,
                                    const Partition& partition,
                                    ClusterAlgorithm algorithm) {
  double stat = 0.0;
  for (const auto& members : partition.groups()) {
    if (members.size() < 2) continue;
    std::vector<std::vector<double>> vals;
    vals.reserve(members.size());
    for (std::size_t j : members) vals.push_back(curves[j].values);
    const auto center = centroid(vals, algorithm);
    for (const auto& v : vals)
      for (std::size_t q = 0; q < v.size(); ++q)
        stat = std::max(stat, std::fabs(v[q] - center[q]));
  }
  return stat;
}

}  // namespace detail

inline BaselineResult bootstrap_test_h0k(
    const std::vector<PopulationSample>& samples, int k,
    const BootstrapConfig& config) {
  const int j_total = static_cast<int>(samples.size());
  if (k < 1 || k > j_total)
    throw std::invalid_argument("bootstrap_test_h0k: K out of range");
  if (config.B < 1)
    throw std::invalid_argument("bootstrap_test_h0k: invalid resample count");

  auto grid = std::make_shared<const TimeGrid>(
      common_grid(samples, config.grid_points));
  std::vector<GridCurve> curves;
  curves.reserve(samples.size());
  for (const auto& s : samples)
    curves.push_back(evaluate_on_grid(kaplan_meier(s), grid));

  const auto fitted = cluster(curves, k, config.cluster);

  BaselineResult result;
  result.K = k;
  result.partition = fitted.partition;
  result.statistic = detail::sup_centroid_distance(curves, fitted.partition,
                                                   config.cluster.algorithm);

  const auto groups = fitted.partition.groups();
  result.boot_statistics.reserve(config.B);
  int exceed = 0;
  for (int b = 0; b < config.B; ++b) {
    Rng rng(config.seed, static_cast<std::uint64_t>(b) + 1);
    std::vector<PopulationSample> resampled(samples.size());
    for (const auto& members : groups) {
      std::vector<ObservationRecord> pool;
      for (std::size_t j : members)
        pool.insert(pool.end(), samples[j].records.begin(),
                    samples[j].records.end());
      for (std::size_t j : members) {
        PopulationSample& rs = resampled[j];
        rs.label = samples[j].label;
        rs.records.resize(samples[j].records.size());
        for (auto& rec : rs.records) rec = pool[rng.below(pool.size())];
      }
    }
    std::vector<GridCurve> boot_curves;
    boot_curves.reserve(resampled.size());
    for (const auto& s : resampled)
      boot_curves.push_back(evaluate_on_grid(kaplan_meier(s), grid));
    ClusterConfig boot_cluster = config.cluster;
    boot_cluster.seed = config.seed ^ (0x9e3779b97f4a7c15ULL * (b + 1));
    const auto refit = cluster(boot_curves, k, boot_cluster);
    const double d = detail::sup_centroid_distance(boot_curves, refit.partition,
                                                   config.cluster.algorithm);
    result.boot_statistics.push_back(d);
    if (d >= result.statistic) ++exceed;
  }
  result.p_value =
      static_cast<double>(1 + exceed) / static_cast<double>(config.B + 1);
  return result;
}

inline KSelectionResult bootstrap_select_k(
    const std::vector<PopulationSample>& samples, double alpha,
    const BootstrapConfig& config, int k_max = 0) {
  if (samples.empty())
    throw std::invalid_argument("bootstrap_select_k: no populations");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bootstrap_select_k: alpha must be in (0,1)");
  const int j_total = static_cast<int>(samples.size());
  if (k_max <= 0 || k_max > j_total) k_max = j_total;

  KSelectionResult result;
  result.alpha = alpha;
  if (j_total == 1) {
    result.chosen_K = 1;
    return result;
  }
  for (int k = 1; k <= k_max; ++k) {
    const auto step = bootstrap_test_h0k(samples, k, config);
    ClusterTestResult entry;
    entry.K = k;
    entry.partition = step.partition;
    entry.final_p = step.p_value;
    entry.tested_groups = 0;
    for (const auto& members : step.partition.groups())
      if (members.size() >= 2) ++entry.tested_groups;
    result.trajectory.push_back(std::move(entry));
    result.chosen_K = k;
    if (step.p_value >= alpha) break;
  }
  return result;
}

}  // namespace fastscc
