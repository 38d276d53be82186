#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace fastscc {

// One subject: observed time, event indicator (1 = event, 0 = censored),
// population label.
struct ObservationRecord {
  double time = 0.0;
  int event = 1;
  int population = 0;
};

struct PopulationSample {
  int label = 0;
  std::vector<ObservationRecord> records;

  std::size_t size() const { return records.size(); }
};

// Product-limit step function. Only distinct times with at least one event
// appear; survival_values[u] is the estimate on [event_times[u],
// event_times[u+1]).
struct SurvivalCurve {
  std::vector<double> event_times;
  std::vector<double> survival_values;
  std::vector<int> at_risk;
  std::vector<int> events;
};

// Equally spaced evaluation grid (0, tau], tau = points.back().
struct TimeGrid {
  std::vector<double> points;

  double tau() const { return points.back(); }
  std::size_t size() const { return points.size(); }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.points == b.points;
  }
};

// A survival curve vectorized on a shared grid.
struct GridCurve {
  std::shared_ptr<const TimeGrid> grid;
  std::vector<double> values;
};

inline SurvivalCurve kaplan_meier(const PopulationSample& sample) {
  const std::size_t n = sample.records.size();
  if (n == 0) throw std::invalid_argument("kaplan_meier: empty population");

  std::vector<std::pair<double, int>> obs;
  obs.reserve(n);
  for (const auto& r : sample.records) {
    if (!(r.time >= 0.0))
      throw std::invalid_argument("kaplan_meier: negative time");
    obs.emplace_back(r.time, r.event);
  }
  // Event-before-censoring at tied times: censored subjects stay at risk
  // for that event time. The at-risk count below already uses >= t, so a
  // plain sort by time is enough.
  std::sort(obs.begin(), obs.end());

  SurvivalCurve curve;
  double s = 1.0;
  std::size_t i = 0;
  while (i < n) {
    const double t = obs[i].first;
    int d = 0;
    std::size_t j = i;
    while (j < n && obs[j].first == t) {
      d += obs[j].second;
      ++j;
    }
    if (d > 0) {
      const int at_risk = static_cast<int>(n - i);
      s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
      curve.event_times.push_back(t);
      curve.survival_values.push_back(s);
      curve.at_risk.push_back(at_risk);
      curve.events.push_back(d);
    }
    i = j;
  }
  return curve;
}

// Shared grid of M equally spaced points on (0, tau], where tau is the
// smallest per-population maximum observed time.
inline TimeGrid common_grid(const std::vector<PopulationSample>& samples,
                            int grid_points) {
  if (samples.empty())
    throw std::invalid_argument("common_grid: no populations");
  if (grid_points < 2)
    throw std::invalid_argument("common_grid: need at least 2 grid points");
  // Span the pooled follow-up window: curves are compared out to the largest
  // observed time anywhere, with each estimate held flat beyond its own
  // support. A shorter window (min of per-population maxima) discards the
  // region that best separates slowly-diverging curves.
  double tau = 0.0;
  for (const auto& s : samples) {
    if (s.records.empty())
      throw std::invalid_argument("common_grid: empty population");
    for (const auto& r : s.records) tau = std::max(tau, r.time);
  }
  if (!(tau > 0.0)) throw std::invalid_argument("common_grid: degenerate support");
  TimeGrid grid;
  grid.points.resize(grid_points);
  for (int q = 1; q <= grid_points; ++q)
    grid.points[q - 1] = tau * static_cast<double>(q) / grid_points;
  grid.points.back() = tau;
  return grid;
}

// Right-continuous step evaluation: the factor at an event time t_u is
// included at every grid point >= t_u.
inline GridCurve evaluate_on_grid(const SurvivalCurve& curve,
                                  std::shared_ptr<const TimeGrid> grid) {
  if (!grid || grid->points.empty())
    throw std::invalid_argument("evaluate_on_grid: empty grid");
  GridCurve out;
  out.grid = grid;
  out.values.resize(grid->points.size());
  std::size_t u = 0;
  double s = 1.0;
  for (std::size_t q = 0; q < grid->points.size(); ++q) {
    while (u < curve.event_times.size() &&
           curve.event_times[u] <= grid->points[q]) {
      s = curve.survival_values[u];
      ++u;
    }
    out.values[q] = s;
  }
  return out;
}

}  // namespace fastscc
