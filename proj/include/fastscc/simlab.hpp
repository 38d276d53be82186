#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastscc/bootstrap.hpp"
#include "fastscc/parallel.hpp"
#include "fastscc/procedure.hpp"
#include "fastscc/rng.hpp"
#include "fastscc/survival.hpp"

namespace fastscc {

enum class DistributionKind { Exponential, Gompertz, Weibull };

struct Distribution {
  DistributionKind kind = DistributionKind::Exponential;
  double shape = 1.0;  // Gompertz/Weibull shape; unused for Exponential
  double scale = 1.0;  // Exponential rate, Gompertz rate, Weibull scale

  static Distribution exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate <= 0");
    return {DistributionKind::Exponential, 1.0, rate};
  }
  static Distribution gompertz(double shape, double rate) {
    if (!(shape > 0.0 && rate > 0.0))
      throw std::invalid_argument("gompertz: parameters must be > 0");
    return {DistributionKind::Gompertz, shape, rate};
  }
  static Distribution weibull(double shape, double scale) {
    if (!(shape > 0.0 && scale > 0.0))
      throw std::invalid_argument("weibull: parameters must be > 0");
    return {DistributionKind::Weibull, shape, scale};
  }

  // Closed-form survival S(t) = P(T > t).
  double survival(double t) const {
    switch (kind) {
      case DistributionKind::Exponential:
        return std::exp(-scale * t);
      case DistributionKind::Gompertz:
        return std::exp(-(scale / shape) * (std::exp(shape * t) - 1.0));
      case DistributionKind::Weibull:
        return std::exp(-std::pow(t / scale, shape));
    }
    return 0.0;
  }

  // Inverse-CDF draw.
  double sample(Rng& rng) const {
    const double log_u = std::log(rng.uniform());
    switch (kind) {
      case DistributionKind::Exponential:
        return -log_u / scale;
      case DistributionKind::Gompertz:
        return std::log(1.0 - (shape / scale) * log_u) / shape;
      case DistributionKind::Weibull:
        return scale * std::pow(-log_u, 1.0 / shape);
    }
    return 0.0;
  }
};

struct ScenarioSpec {
  std::vector<Distribution> populations;
  double censor_bound = 5.0;  // C ~ U(0, censor_bound)
  int n_per_group = 100;
  std::uint64_t seed = 0;
};

enum class ScenarioPreset { Ia, Ib, II, III };

inline ScenarioPreset parse_preset(const std::string& name) {
  if (name == "ia") return ScenarioPreset::Ia;
  if (name == "ib") return ScenarioPreset::Ib;
  if (name == "ii") return ScenarioPreset::II;
  if (name == "iii") return ScenarioPreset::III;
  throw std::invalid_argument("unknown scenario preset: " + name);
}

inline ScenarioSpec make_scenario(ScenarioPreset preset, double effect_a,
                                  double censor_bound, int n_per_group,
                                  std::uint64_t seed) {
  if (effect_a < 0.0) throw std::invalid_argument("effect a must be >= 0");
  ScenarioSpec spec;
  spec.censor_bound = censor_bound;
  spec.n_per_group = n_per_group;
  spec.seed = seed;
  switch (preset) {
    case ScenarioPreset::Ia:
      spec.populations = {
          Distribution::exponential(1.0),  Distribution::exponential(1.0),
          Distribution::exponential(1.0),  Distribution::exponential(1.0 + effect_a),
          Distribution::exponential(3.0),  Distribution::exponential(0.5)};
      break;
    case ScenarioPreset::Ib:
      spec.populations = {
          Distribution::exponential(1.0),  Distribution::exponential(1.0),
          Distribution::exponential(1.0),  Distribution::exponential(1.0 + effect_a),
          Distribution::exponential(3.0),  Distribution::exponential(3.0),
          Distribution::exponential(0.5),  Distribution::exponential(0.5)};
      break;
    case ScenarioPreset::II:
      spec.populations = {
          Distribution::exponential(1.0), Distribution::exponential(1.0),
          Distribution::exponential(1.0), Distribution::exponential(3.0),
          Distribution::exponential(3.0), Distribution::exponential(3.0)};
      break;
    case ScenarioPreset::III:
      spec.populations = {
          Distribution::exponential(3.0),  Distribution::exponential(3.0),
          Distribution::exponential(3.0),  Distribution::exponential(3.0 + effect_a),
          // hazard 0.5*e^{2t}: starts above the Exp(3) block, then crosses it
          Distribution::gompertz(2.0, 0.5), Distribution::gompertz(2.0, 0.5),
          Distribution::weibull(0.5, 1.0),  Distribution::weibull(0.5, 1.0)};
      break;
  }
  return spec;
}

// The null K for the H0(K) rejection experiments of a preset.
inline int preset_null_k(ScenarioPreset preset) {
  return preset == ScenarioPreset::II ? 2 : 3;
}

inline PopulationSample generate_sample(const ScenarioSpec& spec,
                                        std::size_t population, Rng& rng) {
  if (population >= spec.populations.size())
    throw std::invalid_argument("generate_sample: population out of range");
  PopulationSample out;
  out.label = static_cast<int>(population) + 1;
  out.records.resize(spec.n_per_group);
  const Distribution& dist = spec.populations[population];
  for (auto& rec : out.records) {
    const double t = dist.sample(rng);
    const double c = rng.uniform(0.0, spec.censor_bound);
    rec.time = std::min(t, c);
    rec.event = (t <= c) ? 1 : 0;
    rec.population = out.label;
  }
  return out;
}

// One dataset per repetition; each (rep, population) owns its own stream.
inline std::vector<PopulationSample> generate_dataset(const ScenarioSpec& spec,
                                                      std::uint64_t rep) {
  std::vector<PopulationSample> samples;
  samples.reserve(spec.populations.size());
  for (std::size_t j = 0; j < spec.populations.size(); ++j) {
    Rng rng(spec.seed, rep * 64 + j + 1);
    samples.push_back(generate_sample(spec, j, rng));
  }
  return samples;
}

enum class Method { FastScc, FastSccNoCorrection, Bootstrap };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::FastScc: return "fastscc";
    case Method::FastSccNoCorrection: return "fastscc-nc";
    case Method::Bootstrap: return "bootstrap";
  }
  return "?";
}

struct ReportRow {
  std::string scenario;
  std::string method;
  double censor_bound = 0.0;
  int n_per_group = 0;
  double alpha = 0.0;
  double rate = 0.0;  // rejection or success proportion
};

struct ExperimentReport {
  int repetitions = 0;
  std::vector<ReportRow> rows;
};

struct EngineConfig {
  ProcedureConfig procedure;
  BootstrapConfig bootstrap;
};

namespace detail {

inline double final_p_for(Method method, const std::vector<PopulationSample>& samples,
                          int k_null, const EngineConfig& engine,
                          std::uint64_t rep) {
  switch (method) {
    case Method::FastScc:
      return test_h0k(samples, k_null, engine.procedure).final_p;
    case Method::FastSccNoCorrection: {
      ProcedureConfig cfg = engine.procedure;
      cfg.correction = CorrectionMethod::None;
      return test_h0k(samples, k_null, cfg).final_p;
    }
    case Method::Bootstrap: {
      BootstrapConfig cfg = engine.bootstrap;
      cfg.seed ^= 0x6a09e667f3bcc909ULL * (rep + 1);
      return bootstrap_test_h0k(samples, k_null, cfg).p_value;
    }
  }
  return 1.0;
}

}  // namespace detail

// Empirical rejection proportion of H0(K_null) per significance level.
inline ExperimentReport run_rejection_experiment(
    const std::string& scenario_name, const ScenarioSpec& spec, int k_null,
    Method method, int repetitions, const std::vector<double>& alphas,
    const EngineConfig& engine) {
  if (repetitions < 1)
    throw std::invalid_argument("run_rejection_experiment: R must be >= 1");
  std::vector<double> final_p(repetitions);
  parallel_for(repetitions, [&](std::size_t rep) {
    const auto samples = generate_dataset(spec, rep);
    final_p[rep] = detail::final_p_for(method, samples, k_null, engine, rep);
  });

  ExperimentReport report;
  report.repetitions = repetitions;
  for (double alpha : alphas) {
    int rejected = 0;
    for (double p : final_p)
      if (p < alpha) ++rejected;
    report.rows.push_back({scenario_name, method_name(method),
                           spec.censor_bound, spec.n_per_group, alpha,
                           static_cast<double>(rejected) / repetitions});
  }
  return report;
}

// Full sequential procedure; success = chosen K and assignment both match
// the generating partition (first `block` populations vs the rest).
inline ExperimentReport run_selection_experiment(
    const std::string& scenario_name, const ScenarioSpec& spec, Method method,
    int repetitions, double alpha, const EngineConfig& engine,
    std::size_t block = 3) {
  if (repetitions < 1)
    throw std::invalid_argument("run_selection_experiment: R must be >= 1");
  const std::size_t j_total = spec.populations.size();
  std::vector<char> success(repetitions, 0);
  parallel_for(repetitions, [&](std::size_t rep) {
    const auto samples = generate_dataset(spec, rep);
    KSelectionResult sel;
    if (method == Method::Bootstrap) {
      BootstrapConfig cfg = engine.bootstrap;
      cfg.seed ^= 0x6a09e667f3bcc909ULL * (rep + 1);
      sel = bootstrap_select_k(samples, alpha, cfg);
    } else {
      ProcedureConfig cfg = engine.procedure;
      if (method == Method::FastSccNoCorrection)
        cfg.correction = CorrectionMethod::None;
      sel = select_k(samples, alpha, cfg);
    }
    bool ok = (sel.chosen_K == 2) && !sel.trajectory.empty();
    if (ok) {
      const auto& a = sel.trajectory.back().partition.assignment;
      for (std::size_t j = 1; ok && j < j_total; ++j) {
        const bool same_block = (j < block);
        ok = same_block ? (a[j] == a[0]) : (a[j] == a[block]);
      }
      ok = ok && a[0] != a[block];
    }
    success[rep] = ok ? 1 : 0;
  });

  ExperimentReport report;
  report.repetitions = repetitions;
  int count = 0;
  for (char s : success) count += s;
  report.rows.push_back({scenario_name, method_name(method), spec.censor_bound,
                         spec.n_per_group, alpha,
                         static_cast<double>(count) / repetitions});
  return report;
}

struct TimingReport {
  std::string scenario;
  int n_per_group = 0;
  double fast_seconds = 0.0;  // median of 5 single runs
  double bootstrap_seconds = 0.0;
  double ratio = 0.0;
};

// Median-of-5 wall clock of a single full run of each method on identical
// data. Data generation is excluded; grid building, clustering, testing
// (and all B resamples for the baseline) are included.
inline TimingReport run_timing(const std::string& scenario_name,
                               const ScenarioSpec& spec, ScenarioPreset preset,
                               const EngineConfig& engine) {
  const auto samples = generate_dataset(spec, 0);
  const int k_null = preset_null_k(preset);
  const bool full_procedure = (preset == ScenarioPreset::II);

  auto time_once = [](const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
  };
  auto median5 = [&](const std::function<void()>& fn) {
    std::vector<double> t;
    for (int i = 0; i < 5; ++i) t.push_back(time_once(fn));
    std::sort(t.begin(), t.end());
    return t[2];
  };

  TimingReport report;
  report.scenario = scenario_name;
  report.n_per_group = spec.n_per_group;
  report.fast_seconds = median5([&] {
    if (full_procedure)
      select_k(samples, 0.05, engine.procedure);
    else
      test_h0k(samples, k_null, engine.procedure);
  });
  report.bootstrap_seconds = median5([&] {
    if (full_procedure)
      bootstrap_select_k(samples, 0.05, engine.bootstrap);
    else
      bootstrap_test_h0k(samples, k_null, engine.bootstrap);
  });
  report.ratio = report.bootstrap_seconds /
                 (report.fast_seconds > 0.0 ? report.fast_seconds : 1e-12);
  return report;
}

}  // namespace fastscc
