#include <memory>

#include "doctest.h"
#include "fastscc/cluster.hpp"
#include "fastscc/rng.hpp"
#include "oracles.hpp"

using namespace fastscc;

namespace {

std::shared_ptr<const TimeGrid> make_grid(std::size_t m) {
  TimeGrid g;
  for (std::size_t q = 1; q <= m; ++q)
    g.points.push_back(static_cast<double>(q));
  return std::make_shared<const TimeGrid>(std::move(g));
}

std::vector<GridCurve> make_curves(const std::vector<std::vector<double>>& vals) {
  auto grid = make_grid(vals.front().size());
  std::vector<GridCurve> curves;
  for (const auto& v : vals) curves.push_back({grid, v});
  return curves;
}

std::vector<std::vector<std::size_t>> groups_of(const Partition& p) {
  return p.groups();
}

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("K equal to J gives singletons with zero wss") {
  const auto curves = make_curves({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}});
  const auto res = cluster(curves, 3, {});
  CHECK(res.wss == doctest::Approx(0.0));
  CHECK(res.partition.assignment == std::vector<int>{0, 1, 2});
}

TEST_CASE("K equal to 1 gives the pointwise mean centroid") {
  const auto curves = make_curves({{0.0, 0.0}, {1.0, 0.5}, {0.5, 1.0}});
  const auto res = cluster(curves, 1, {});
  CHECK(res.partition.assignment == std::vector<int>{0, 0, 0});
  // wss = total squared dispersion around the mean (0.5, 0.5)
  double expect = 0.0;
  for (const auto& c : curves)
    for (double v : c.values) expect += (v - 0.5) * (v - 0.5);
  CHECK(res.wss == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("two separated bundles recover the optimal 2-partition") {
  Rng rng(55);
  std::vector<std::vector<double>> vals;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> v;
    for (int q = 0; q < 10; ++q) v.push_back(0.8 + 0.02 * rng.uniform());
    vals.push_back(v);
  }
  for (int i = 0; i < 3; ++i) {
    std::vector<double> v;
    for (int q = 0; q < 10; ++q) v.push_back(0.5 + 0.02 * rng.uniform());
    vals.push_back(v);
  }
  const auto res = cluster(make_curves(vals), 2, {});
  CHECK(res.wss ==
        doctest::Approx(oracles::min_wss_exhaustive(vals, 2)).epsilon(1e-9));
  const auto g = groups_of(res.partition);
  CHECK(g[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(g[1] == std::vector<std::size_t>{3, 4, 5});
}

TEST_CASE("centroid operations") {
  const std::vector<std::vector<double>> one{{0.2, 0.7}};
  CHECK(centroid(one, ClusterAlgorithm::KMeans) == one[0]);
  CHECK(centroid(one, ClusterAlgorithm::KMedians) == one[0]);

  const std::vector<std::vector<double>> two{{0.0, 1.0}, {1.0, 0.0}};
  const auto mid = centroid(two, ClusterAlgorithm::KMeans);
  CHECK(mid[0] == doctest::Approx(0.5));
  CHECK(mid[1] == doctest::Approx(0.5));

  const std::vector<std::vector<double>> three{{0.2}, {0.5}, {0.9}};
  CHECK(centroid(three, ClusterAlgorithm::KMedians)[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(centroid({}, ClusterAlgorithm::KMeans),
                  std::invalid_argument);
}

TEST_CASE("determinism for identical inputs") {
  Rng rng(77);
  std::vector<std::vector<double>> vals;
  for (int i = 0; i < 7; ++i) {
    std::vector<double> v;
    for (int q = 0; q < 8; ++q) v.push_back(rng.uniform());
    vals.push_back(v);
  }
  ClusterConfig config;
  config.seed = 123;
  const auto a = cluster(make_curves(vals), 3, config);
  const auto b = cluster(make_curves(vals), 3, config);
  CHECK(a.partition.assignment == b.partition.assignment);
  CHECK(a.wss == b.wss);
}

TEST_CASE("input permutation yields the same clusters up to relabeling") {
  Rng rng(79);
  std::vector<std::vector<double>> vals;
  for (int i = 0; i < 6; ++i) {
    std::vector<double> v;
    for (int q = 0; q < 6; ++q)
      v.push_back((i < 3 ? 0.8 : 0.3) + 0.05 * rng.uniform());
    vals.push_back(v);
  }
  ClusterConfig config;
  config.seed = 5;
  const auto base = cluster(make_curves(vals), 2, config);
  const std::vector<std::size_t> perm{4, 0, 5, 2, 1, 3};
  std::vector<std::vector<double>> shuffled;
  for (std::size_t i : perm) shuffled.push_back(vals[i]);
  const auto moved = cluster(make_curves(shuffled), 2, config);
  // map back and compare as label partitions of the original indices
  std::vector<int> recovered(vals.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos)
    recovered[perm[pos]] = moved.partition.assignment[pos];
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = 0; j < vals.size(); ++j)
      CHECK((base.partition.assignment[i] == base.partition.assignment[j]) ==
            (recovered[i] == recovered[j]));
}

TEST_CASE("wss is non-increasing in K") {
  Rng rng(83);
  std::vector<std::vector<double>> vals;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> v;
    for (int q = 0; q < 10; ++q) v.push_back(rng.uniform());
    vals.push_back(v);
  }
  const auto curves = make_curves(vals);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 8; ++k) {
    const auto res = cluster(curves, k, {});
    CHECK(res.wss <= prev + 1e-9);
    prev = res.wss;
  }
}

TEST_CASE("small-instance optimality vs exhaustive enumeration") {
  Rng rng(89);
  int optimal = 0;
  const int instances = 200;
  for (int trial = 0; trial < instances; ++trial) {
    const std::size_t j = 4 + rng.below(5);  // 4..8 curves
    const int k = 2 + static_cast<int>(rng.below(2));  // K in {2,3}
    std::vector<std::vector<double>> vals;
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<double> v;
      for (int q = 0; q < 5; ++q) v.push_back(rng.uniform());
      vals.push_back(v);
    }
    ClusterConfig config;
    config.seed = 1000 + trial;
    const auto res = cluster(make_curves(vals), k, config);
    const double best = oracles::min_wss_exhaustive(vals, k);
    if (res.wss <= best * (1.0 + 1e-9) + 1e-12) ++optimal;
  }
  CHECK(optimal >= instances * 99 / 100);
}

TEST_CASE("kmedians uses L1 dispersion") {
  const auto curves = make_curves({{0.0}, {0.1}, {1.0}});
  ClusterConfig config;
  config.algorithm = ClusterAlgorithm::KMedians;
  const auto res = cluster(curves, 1, config);
  // median is 0.1; L1 dispersion = 0.1 + 0 + 0.9
  CHECK(res.wss == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("errors") {
  const auto curves = make_curves({{0.1, 0.2}, {0.3, 0.4}});
  CHECK_THROWS_AS(cluster(curves, 3, {}), std::invalid_argument);
  CHECK_THROWS_AS(cluster(curves, 0, {}), std::invalid_argument);
  auto mixed = curves;
  mixed[1].grid = make_grid(3);
  mixed[1].values = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(cluster(mixed, 1, {}), std::invalid_argument);
}

}  // TEST_SUITE
