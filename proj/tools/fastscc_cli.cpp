#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fastscc/fastscc.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

fastscc::CorrectionMethod parse_correction(const std::string& name) {
  using fastscc::CorrectionMethod;
  if (name == "none") return CorrectionMethod::None;
  if (name == "bonferroni") return CorrectionMethod::Bonferroni;
  if (name == "holm") return CorrectionMethod::Holm;
  if (name == "hochberg") return CorrectionMethod::Hochberg;
  if (name == "hommel") return CorrectionMethod::Hommel;
  if (name == "bh") return CorrectionMethod::BH;
  if (name == "by") return CorrectionMethod::BY;
  throw std::invalid_argument("unknown correction: " + name);
}

fastscc::WeightKind parse_test(const std::string& name) {
  using fastscc::WeightKind;
  if (name == "logrank") return WeightKind::LogRank;
  if (name == "gehan") return WeightKind::GehanBreslow;
  if (name == "tarone-ware") return WeightKind::TaroneWare;
  if (name == "peto") return WeightKind::PetoPeto;
  if (name == "mpeto") return WeightKind::ModifiedPetoPeto;
  if (name == "fh") return WeightKind::FlemingHarrington;
  throw std::invalid_argument("unknown test: " + name);
}

struct Options {
  std::string input;
  std::string time_col = "time";
  std::string status_col = "status";
  std::string group_col = "group";
  char delimiter = ',';
  double alpha = 0.05;
  std::string correction = "bonferroni";
  std::string test = "logrank";
  double rho = 0.0;
  double gamma = 0.0;
  int grid_points = 50;
  std::string cluster_algo = "kmeans";
  int restarts = 100;
  std::uint64_t seed = 42;
  std::string mode;
  int k = 0;
  std::string scenario;
  std::string method = "fastscc";
  double effect_a = 0.0;
  double censor_bound = 5.0;
  int n_per_group = 100;
  int reps = 1000;
  int bootstrap_b = 500;
  std::string out;
  std::string format = "structured-record";
};

json config_echo(const Options& opt) {
  return json{{"input", opt.input},
              {"time_col", opt.time_col},
              {"status_col", opt.status_col},
              {"group_col", opt.group_col},
              {"alpha", opt.alpha},
              {"correction", opt.correction},
              {"test", opt.test},
              {"rho", opt.rho},
              {"gamma", opt.gamma},
              {"grid_points", opt.grid_points},
              {"cluster", opt.cluster_algo},
              {"restarts", opt.restarts},
              {"seed", opt.seed},
              {"mode", opt.mode},
              {"k", opt.k},
              {"scenario", opt.scenario},
              {"method", opt.method},
              {"effect_a", opt.effect_a},
              {"censor_bound", opt.censor_bound},
              {"n_per_group", opt.n_per_group},
              {"reps", opt.reps},
              {"bootstrap_b", opt.bootstrap_b},
              {"format", opt.format}};
}

fastscc::ProcedureConfig procedure_config(const Options& opt) {
  fastscc::ProcedureConfig cfg;
  cfg.weights.kind = parse_test(opt.test);
  cfg.weights.rho = opt.rho;
  cfg.weights.gamma = opt.gamma;
  cfg.correction = parse_correction(opt.correction);
  cfg.grid_points = opt.grid_points;
  cfg.cluster.algorithm = opt.cluster_algo == "kmedians"
                              ? fastscc::ClusterAlgorithm::KMedians
                              : fastscc::ClusterAlgorithm::KMeans;
  cfg.cluster.restarts = opt.restarts;
  cfg.cluster.seed = opt.seed;
  return cfg;
}

fastscc::EngineConfig engine_config(const Options& opt) {
  fastscc::EngineConfig engine;
  engine.procedure = procedure_config(opt);
  engine.bootstrap.B = opt.bootstrap_b;
  engine.bootstrap.seed = opt.seed;
  engine.bootstrap.cluster = engine.procedure.cluster;
  engine.bootstrap.grid_points = opt.grid_points;
  return engine;
}

json partition_json(const fastscc::Partition& part,
                    const std::vector<std::string>& names) {
  json groups = json::object();
  for (std::size_t j = 0; j < part.assignment.size(); ++j) {
    const std::string name =
        j < names.size() ? names[j] : std::to_string(j + 1);
    groups[name] = part.assignment[j] + 1;
  }
  return groups;
}

json test_result_json(const fastscc::ClusterTestResult& r,
                      const std::vector<std::string>& names) {
  return json{{"K", r.K},
              {"assignment", partition_json(r.partition, names)},
              {"raw_p", r.raw_p},
              {"adjusted_p", r.adjusted_p},
              {"final_p", r.final_p},
              {"tested_groups", r.tested_groups}};
}

json curves_json(const std::vector<fastscc::PopulationSample>& samples,
                 const std::vector<std::string>& names, int grid_points) {
  auto grid = std::make_shared<const fastscc::TimeGrid>(
      fastscc::common_grid(samples, grid_points));
  json out;
  out["grid"] = grid->points;
  json per_group = json::array();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto gc = fastscc::evaluate_on_grid(
        fastscc::kaplan_meier(samples[j]), grid);
    per_group.push_back(json{{"group", names[j]}, {"values", gc.values}});
  }
  out["curves"] = per_group;
  return out;
}

void emit(const Options& opt, const json& doc,
          const std::vector<std::string>& table_rows) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) throw fastscc::DataError("cannot open output file: " + opt.out);
    os = &file;
  }
  if (opt.format == "delimited-table") {
    for (const auto& row : table_rows) *os << row << "\n";
  } else {
    *os << doc.dump(2) << "\n";
  }
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

int run_mode(const Options& opt) {
  json doc;
  doc["version"] = fastscc::version;
  doc["config"] = config_echo(opt);
  std::vector<std::string> rows;

  if (opt.mode == "select" || opt.mode == "test-k" || opt.mode == "pairwise") {
    if (opt.input.empty())
      throw std::invalid_argument("mode '" + opt.mode + "' requires --input");
    const auto data = fastscc::ingest_csv(opt.input, opt.time_col,
                                          opt.status_col, opt.group_col,
                                          opt.delimiter);
    const auto cfg = procedure_config(opt);

    if (opt.mode == "select") {
      const auto sel = fastscc::select_k(data.samples, opt.alpha, cfg);
      json traj = json::array();
      for (const auto& step : sel.trajectory)
        traj.push_back(test_result_json(step, data.group_names));
      doc["results"] = json{{"chosen_K", sel.chosen_K},
                            {"alpha", sel.alpha},
                            {"trajectory", traj}};
      doc["results"]["plot_data"] =
          curves_json(data.samples, data.group_names, opt.grid_points);
      rows.push_back("K,final_p,tested_groups");
      for (const auto& step : sel.trajectory)
        rows.push_back(std::to_string(step.K) + "," + fmt(step.final_p) + "," +
                       std::to_string(step.tested_groups));
    } else if (opt.mode == "test-k") {
      if (opt.k < 1) throw std::invalid_argument("mode test-k requires --k");
      const auto r = fastscc::test_h0k(data.samples, opt.k, cfg);
      doc["results"] = test_result_json(r, data.group_names);
      rows.push_back("K,final_p,tested_groups");
      rows.push_back(std::to_string(r.K) + "," + fmt(r.final_p) + "," +
                     std::to_string(r.tested_groups));
    } else {
      const auto pw = fastscc::pairwise(data.samples, cfg.weights,
                                        cfg.correction);
      auto matrix_json = [&](const std::vector<std::vector<double>>& m) {
        json out = json::array();
        for (std::size_t i = 1; i < pw.J; ++i) {
          json row = json::array();
          for (std::size_t j = 0; j < i; ++j) {
            if (std::isnan(m[i][j]))
              row.push_back(nullptr);
            else
              row.push_back(m[i][j]);
          }
          out.push_back(row);
        }
        return out;
      };
      doc["results"] = json{{"groups", data.group_names},
                            {"raw", matrix_json(pw.raw)},
                            {"adjusted", matrix_json(pw.adjusted)}};
      rows.push_back("group_a,group_b,raw_p,adjusted_p");
      for (std::size_t i = 1; i < pw.J; ++i)
        for (std::size_t j = 0; j < i; ++j)
          rows.push_back(data.group_names[i] + "," + data.group_names[j] + "," +
                         fmt(pw.raw[i][j]) + "," + fmt(pw.adjusted[i][j]));
    }
  } else if (opt.mode == "simulate") {
    if (opt.scenario.empty())
      throw std::invalid_argument("mode simulate requires --scenario");
    const auto preset = fastscc::parse_preset(opt.scenario);
    const auto spec = fastscc::make_scenario(preset, opt.effect_a,
                                             opt.censor_bound, opt.n_per_group,
                                             opt.seed);
    fastscc::Method method = fastscc::Method::FastScc;
    if (opt.method == "bootstrap") method = fastscc::Method::Bootstrap;
    else if (opt.correction == "none")
      method = fastscc::Method::FastSccNoCorrection;
    const auto engine = engine_config(opt);

    fastscc::ExperimentReport report;
    if (preset == fastscc::ScenarioPreset::II) {
      report = fastscc::run_selection_experiment(opt.scenario, spec, method,
                                                 opt.reps, opt.alpha, engine);
    } else {
      report = fastscc::run_rejection_experiment(
          opt.scenario, spec, fastscc::preset_null_k(preset), method, opt.reps,
          {opt.alpha}, engine);
    }
    json jrows = json::array();
    rows.push_back("scenario,method,censor_bound,n,alpha,rate,repetitions");
    for (const auto& r : report.rows) {
      jrows.push_back(json{{"scenario", r.scenario},
                           {"method", r.method},
                           {"censor_bound", r.censor_bound},
                           {"n", r.n_per_group},
                           {"alpha", r.alpha},
                           {"rate", r.rate},
                           {"repetitions", report.repetitions}});
      rows.push_back(r.scenario + "," + r.method + "," + fmt(r.censor_bound) +
                     "," + std::to_string(r.n_per_group) + "," + fmt(r.alpha) +
                     "," + fmt(r.rate) + "," +
                     std::to_string(report.repetitions));
    }
    doc["results"] = json{{"rows", jrows}};
  } else if (opt.mode == "bench") {
    if (opt.scenario.empty())
      throw std::invalid_argument("mode bench requires --scenario");
    const auto preset = fastscc::parse_preset(opt.scenario);
    const auto spec = fastscc::make_scenario(preset, opt.effect_a,
                                             opt.censor_bound, opt.n_per_group,
                                             opt.seed);
    const auto timing =
        fastscc::run_timing(opt.scenario, spec, preset, engine_config(opt));
    doc["results"] = json{{"scenario", timing.scenario},
                          {"n", timing.n_per_group},
                          {"fast_seconds", timing.fast_seconds},
                          {"bootstrap_seconds", timing.bootstrap_seconds},
                          {"ratio", timing.ratio}};
    rows.push_back("scenario,n,fast_seconds,bootstrap_seconds,ratio");
    rows.push_back(timing.scenario + "," + std::to_string(timing.n_per_group) +
                   "," + fmt(timing.fast_seconds) + "," +
                   fmt(timing.bootstrap_seconds) + "," + fmt(timing.ratio));
  } else {
    throw std::invalid_argument("unknown mode: " + opt.mode);
  }

  emit(opt, doc, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastSCC: fast clustering of right-censored survival curves"};
  Options opt;
  std::string delim = ",";

  app.add_option("--input", opt.input, "Delimited input file with header row");
  app.add_option("--time-col", opt.time_col, "Time column name");
  app.add_option("--status-col", opt.status_col, "Status column name (0/1)");
  app.add_option("--group-col", opt.group_col, "Group column name");
  app.add_option("--delimiter", delim, "Field delimiter (default comma)");
  app.add_option("--alpha", opt.alpha, "Significance level");
  app.add_option("--correction", opt.correction,
                 "none|bonferroni|holm|hochberg|hommel|bh|by");
  app.add_option("--test", opt.test,
                 "logrank|gehan|tarone-ware|peto|mpeto|fh");
  app.add_option("--rho", opt.rho, "Fleming-Harrington rho");
  app.add_option("--gamma", opt.gamma, "Fleming-Harrington gamma");
  app.add_option("--grid-points", opt.grid_points, "Curve evaluation grid size");
  app.add_option("--cluster", opt.cluster_algo, "kmeans|kmedians");
  app.add_option("--restarts", opt.restarts, "Clustering restarts");
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--mode", opt.mode,
                 "select|test-k|pairwise|simulate|bench")
      ->required();
  app.add_option("--k", opt.k, "Number of clusters for test-k");
  app.add_option("--scenario", opt.scenario, "ia|ib|ii|iii");
  app.add_option("--method", opt.method, "fastscc|bootstrap (simulate mode)");
  app.add_option("--effect-a", opt.effect_a, "Effect constant a");
  app.add_option("--censor-bound", opt.censor_bound, "Censoring bound b");
  app.add_option("--n-per-group", opt.n_per_group, "Per-population size");
  app.add_option("--reps", opt.reps, "Monte-Carlo repetitions");
  app.add_option("--bootstrap-b", opt.bootstrap_b, "Bootstrap resamples B");
  app.add_option("--out", opt.out, "Output path (default stdout)");
  app.add_option("--format", opt.format, "structured-record|delimited-table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (delim.size() != 1) {
    std::cerr << "error: --delimiter must be a single character\n";
    return kExitUsage;
  }
  opt.delimiter = delim[0];
  if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) {
    std::cerr << "error: --alpha must be in (0,1)\n";
    return kExitUsage;
  }
  if (opt.format != "structured-record" && opt.format != "delimited-table") {
    std::cerr << "error: unknown --format " << opt.format << "\n";
    return kExitUsage;
  }

  try {
    return run_mode(opt);
  } catch (const fastscc::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
