#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fastscc/rng.hpp"
#include "fastscc/survival.hpp"

namespace fastscc {

enum class ClusterAlgorithm { KMeans, KMedians };

struct ClusterConfig {
  ClusterAlgorithm algorithm = ClusterAlgorithm::KMeans;
  int restarts = 100;
  int max_iterations = 50;
  std::uint64_t seed = 0;
};

// assignment[j] in 0..K-1; clusters renumbered by smallest member index.
struct Partition {
  std::vector<int> assignment;
  int K = 0;

  std::vector<std::vector<std::size_t>> groups() const {
    std::vector<std::vector<std::size_t>> g(K);
    for (std::size_t j = 0; j < assignment.size(); ++j)
      g[assignment[j]].push_back(j);
    return g;
  }
};

struct ClusterResult {
  Partition partition;
  double wss = 0.0;
};

namespace detail {

inline double sq_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

inline double curve_dist(const std::vector<double>& a,
                         const std::vector<double>& b,
                         ClusterAlgorithm algorithm) {
  return algorithm == ClusterAlgorithm::KMeans ? sq_l2(a, b) : l1(a, b);
}

inline void canonicalize(Partition& part) {
  std::vector<int> first(part.K, -1);
  int next = 0;
  std::vector<int> relabel(part.K, -1);
  for (std::size_t j = 0; j < part.assignment.size(); ++j) {
    const int c = part.assignment[j];
    if (relabel[c] < 0) relabel[c] = next++;
  }
  for (auto& a : part.assignment) a = relabel[a];
  (void)first;
}

}  // namespace detail

// Pointwise mean (KMeans) or pointwise median (KMedians) of member vectors.
inline std::vector<double> centroid(
    const std::vector<std::vector<double>>& members, ClusterAlgorithm algorithm) {
  if (members.empty()) throw std::invalid_argument("centroid: empty member set");
  const std::size_t dim = members.front().size();
  std::vector<double> out(dim, 0.0);
  if (algorithm == ClusterAlgorithm::KMeans) {
    for (const auto& m : members)
      for (std::size_t i = 0; i < dim; ++i) out[i] += m[i];
    for (auto& v : out) v /= static_cast<double>(members.size());
  } else {
    std::vector<double> col(members.size());
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < members.size(); ++k) col[k] = members[k][i];
      std::sort(col.begin(), col.end());
      const std::size_t n = col.size();
      out[i] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
  }
  return out;
}

namespace detail {

inline ClusterResult lloyd_once(const std::vector<std::vector<double>>& points,
                                int k, const ClusterConfig& config, Rng& rng) {
  const std::size_t n = points.size();
  const std::size_t kk = static_cast<std::size_t>(k);

  // k-means++ style seeding: first center uniform, then distance-weighted.
  std::vector<std::vector<double>> centers;
  centers.reserve(kk);
  centers.push_back(points[rng.below(n)]);
  std::vector<double> dist(n);
  while (centers.size() < kk) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers)
        best = std::min(best, curve_dist(points[j], c, config.algorithm));
      dist[j] = best;
      total += best;
    }
    std::size_t pick;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (std::size_t j = 0; j < n; ++j) {
        target -= dist[j];
        if (target <= 0.0) {
          pick = j;
          break;
        }
      }
    } else {
      pick = rng.below(n);  // all points coincide with some center
    }
    centers.push_back(points[pick]);
  }

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    std::vector<int> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = curve_dist(points[j], centers[c], config.algorithm);
        if (d < best) {
          best = d;
          best_c = static_cast<int>(c);
        }
      }
      next[j] = best_c;
    }

    // Refill empty clusters with the point farthest from its center.
    for (;;) {
      std::vector<int> count(kk, 0);
      for (int c : next) ++count[c];
      int empty = -1;
      for (std::size_t c = 0; c < kk; ++c)
        if (count[c] == 0) {
          empty = static_cast<int>(c);
          break;
        }
      if (empty < 0) break;
      double worst = -1.0;
      std::size_t worst_j = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (count[next[j]] < 2) continue;
        const double d = curve_dist(points[j], centers[next[j]], config.algorithm);
        if (d > worst) {
          worst = d;
          worst_j = j;
        }
      }
      next[worst_j] = empty;
      centers[empty] = points[worst_j];
    }

    const bool converged = (next == assignment);
    assignment = std::move(next);
    if (converged) break;

    for (std::size_t c = 0; c < kk; ++c) {
      std::vector<std::vector<double>> members;
      for (std::size_t j = 0; j < n; ++j)
        if (assignment[j] == static_cast<int>(c)) members.push_back(points[j]);
      centers[c] = centroid(members, config.algorithm);
    }
  }

  ClusterResult result;
  result.partition.assignment = assignment;
  result.partition.K = k;
  result.wss = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    result.wss += curve_dist(points[j], centers[assignment[j]], config.algorithm);
  return result;
}

}  // namespace detail

// Best-of-restarts Lloyd iteration over grid-evaluated curves.
inline ClusterResult cluster(const std::vector<GridCurve>& curves, int k,
                             const ClusterConfig& config) {
  const std::size_t n = curves.size();
  if (n == 0) throw std::invalid_argument("cluster: no curves");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("cluster: K out of range");
  if (config.restarts < 1 || config.max_iterations < 1)
    throw std::invalid_argument("cluster: invalid config");
  for (const auto& c : curves)
    if (!c.grid || !(*c.grid == *curves.front().grid))
      throw std::invalid_argument("cluster: mismatched grids");

  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (const auto& c : curves) points.push_back(c.values);

  ClusterResult best;
  if (static_cast<std::size_t>(k) == n) {
    best.partition.K = k;
    best.partition.assignment.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      best.partition.assignment[j] = static_cast<int>(j);
    best.wss = 0.0;
  } else {
    best.wss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
      Rng rng(config.seed, static_cast<std::uint64_t>(r) + 1);
      auto res = detail::lloyd_once(points, k, config, rng);
      if (res.wss < best.wss) best = std::move(res);
    }
  }
  detail::canonicalize(best.partition);
  return best;
}

}  // namespace fastscc
