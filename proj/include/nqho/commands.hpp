#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nqho/io.hpp"
#include "nqho/mi.hpp"
#include "nqho/solvers.hpp"
#include "nqho/validation.hpp"
#include "nqho/version.hpp"

namespace nqho {

inline Stepper parse_stepper(const std::string& name) {
  if (name == "ssfm") return Stepper::ssfm;
  if (name == "rk4") return Stepper::rk4;
  throw ConfigError("unknown stepper '" + name + "' (expected ssfm or rk4)");
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  double length = 20.0;
  Eigen::Index nodes = 1024;
  double alpha = 1.0;
  double sigma = 1.0;
  double gamma = 0.0;
  double dt = 5e-5;
  int m = 16;
  double beta = 0.4;
  std::uint64_t seed = 1;
  double t_end = 20.0;
  Eigen::Index snapshot_every = 2000;
  Stepper stepper = Stepper::ssfm;
  std::string out_dir;
};

inline nlohmann::json simulate_manifest(const SimulateOptions& opt) {
  return nlohmann::json{
      {"version", kVersion},
      {"command", "simulate"},
      {"prng", kPrngAlgorithm},
      {"grid", {{"length", opt.length}, {"node_count", opt.nodes}}},
      {"params",
       {{"alpha", opt.alpha}, {"sigma", opt.sigma}, {"gamma", opt.gamma}, {"dt", opt.dt}}},
      {"initial", {{"m", opt.m}, {"beta", opt.beta}, {"seed", opt.seed}}},
      {"run",
       {{"t_end", opt.t_end},
        {"snapshot_every", opt.snapshot_every},
        {"stepper", stepper_name(opt.stepper)}}},
  };
}

inline SimulateOptions simulate_options_from_manifest(const nlohmann::json& j) {
  if (j.at("command").get<std::string>() != "simulate") {
    throw ConfigError("manifest does not describe a simulate run");
  }
  SimulateOptions opt;
  opt.length = j.at("grid").at("length").get<double>();
  opt.nodes = j.at("grid").at("node_count").get<Eigen::Index>();
  opt.alpha = j.at("params").at("alpha").get<double>();
  opt.sigma = j.at("params").at("sigma").get<double>();
  opt.gamma = j.at("params").at("gamma").get<double>();
  opt.dt = j.at("params").at("dt").get<double>();
  opt.m = j.at("initial").at("m").get<int>();
  opt.beta = j.at("initial").at("beta").get<double>();
  opt.seed = j.at("initial").at("seed").get<std::uint64_t>();
  opt.t_end = j.at("run").at("t_end").get<double>();
  opt.snapshot_every = j.at("run").at("snapshot_every").get<Eigen::Index>();
  opt.stepper = parse_stepper(j.at("run").at("stepper").get<std::string>());
  return opt;
}

inline void write_snapshot_csv(const std::filesystem::path& path,
                               const WaveField<double>& field) {
  std::ofstream out = open_output(path);
  out << "x,re,im,abs\n";
  for (Eigen::Index j = 0; j < field.values.size(); ++j) {
    out << format_g17(field.grid.nodes[j]) << ',' << format_g17(field.values[j].real())
        << ',' << format_g17(field.values[j].imag()) << ','
        << format_g17(std::abs(field.values[j])) << '\n';
  }
}

/// Runs one trajectory and writes snapshot_NNNNNN.csv files plus the manifest.
/// Returns the number of snapshots written.
inline int run_simulate_command(const SimulateOptions& opt) {
  MiConfig<double> config;
  config.grid = make_grid(opt.length, opt.nodes);
  config.params = NqhoParams<double>{opt.alpha, opt.sigma, opt.gamma, opt.dt};
  config.m = opt.m;
  config.beta = opt.beta;
  config.t_adjust = 0.0;
  config.t_end = opt.t_end;
  config.sample_stride = opt.snapshot_every;
  config.seed_base = opt.seed;
  if (opt.stepper == Stepper::rk4) require_rk4_stable(config.params, config.grid);

  const std::filesystem::path dir(opt.out_dir);
  ensure_directory(dir);
  WaveField<double> field = make_initial_condition(config, opt.seed);
  int count = 0;
  auto dump = [&](const WaveField<double>& f) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%06d.csv", count);
    write_snapshot_csv(dir / name, f);
    ++count;
  };
  integrate(std::move(field), config.params, opt.t_end, opt.stepper, dump,
            opt.snapshot_every);
  std::ofstream manifest = open_output(dir / "manifest.json");
  manifest << simulate_manifest(opt).dump(2) << '\n';
  return count;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkOptions {
  std::string out_dir;
};

/// Runs the validation table, writes benchmark.csv, returns overall pass.
/// A NaN anywhere becomes a fail row rather than an abort.
inline bool run_benchmark_command(const BenchmarkOptions& opt,
                                  std::vector<validation::CheckResult>* rows_out = nullptr) {
  namespace v = nqho::validation;
  std::vector<v::CheckResult> rows;
  auto guarded = [&rows](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& err) {
      rows.push_back(v::CheckResult{name + " (" + err.what() + ")",
                                    std::numeric_limits<double>::quiet_NaN(), 0.0, false});
    }
  };
  guarded("norm-conservation", [&] { rows.push_back(v::norm_conservation()); });
  guarded("dissipation-law", [&] { rows.push_back(v::dissipation_law()); });
  guarded("plane-wave", [&] { rows.push_back(v::plane_wave_agreement()); });
  for (int n = 0; n <= 2; ++n) {
    for (const Stepper stepper : {Stepper::ssfm, Stepper::rk4}) {
      guarded("stationarity-n" + std::to_string(n), [&] {
        const v::StationarityResult sr = v::eigenmode_stationarity(n, stepper);
        rows.push_back(sr.amplitude);
        rows.push_back(sr.l2);
      });
    }
  }
  guarded("ssfm-vs-rk4", [&] { rows.push_back(v::ssfm_vs_rk4()); });
  guarded("order-of-accuracy", [&] {
    for (const auto& check : v::order_of_accuracy().checks) rows.push_back(check);
  });

  const std::filesystem::path dir(opt.out_dir);
  ensure_directory(dir);
  std::ofstream out = open_output(dir / "benchmark.csv");
  out << "test,metric,threshold,result\n";
  bool all_pass = true;
  for (const auto& row : rows) {
    out << row.name << ',' << format_g17(row.metric) << ',' << format_g17(row.threshold)
        << ',' << (row.pass ? "pass" : "fail") << '\n';
    all_pass = all_pass && row.pass;
  }
  std::ofstream manifest = open_output(dir / "manifest.json");
  manifest << nlohmann::json{{"version", kVersion},
                             {"command", "benchmark"},
                             {"prng", kPrngAlgorithm}}
                  .dump(2)
           << '\n';
  if (rows_out) *rows_out = rows;
  return all_pass;
}

// ---------------------------------------------------------------------------
// ensemble
// ---------------------------------------------------------------------------

struct EnsembleOptions {
  double length = 20.0;
  Eigen::Index nodes = 1024;
  double alpha = 1.0;
  double sigma = 1.0;
  double gamma = 0.0;
  double dt = 5e-5;
  int m = 16;
  double beta = 0.4;
  double t_adjust = 10.0;
  double t_end = 20.0;
  Eigen::Index sample_stride = 2000;
  double samples_target = 0.0;  // > 0 overrides sample_stride
  int members = 1;
  std::uint64_t seed_base = 0;
  std::string sweep_param;  // one of alpha|sigma|gamma|beta|m, empty = baseline only
  std::vector<double> sweep_values;
  int jobs = 1;
  std::string out_dir;
  std::string snapshot_dir;  // when set, raw member snapshots are written here
};

/// Snapshot cadence for a samples target: spread ~target/(members*N) snapshots
/// evenly over the recording window.
inline Eigen::Index resolve_sample_stride(const EnsembleOptions& opt) {
  if (opt.samples_target <= 0.0) return opt.sample_stride;
  const long long window = std::llround((opt.t_end - opt.t_adjust) / opt.dt);
  const double per_snapshot = static_cast<double>(opt.members) *
                              static_cast<double>(opt.nodes);
  const long long wanted =
      std::max<long long>(1, std::llround(opt.samples_target / per_snapshot));
  if (wanted <= 1) return window + 1;
  return std::max<long long>(1, window / (wanted - 1));
}

inline MiConfig<double> ensemble_config(const EnsembleOptions& opt) {
  MiConfig<double> config;
  config.grid = make_grid(opt.length, opt.nodes);
  config.params = NqhoParams<double>{opt.alpha, opt.sigma, opt.gamma, opt.dt};
  config.m = opt.m;
  config.beta = opt.beta;
  config.t_adjust = opt.t_adjust;
  config.t_end = opt.t_end;
  config.sample_stride = resolve_sample_stride(opt);
  config.members = opt.members;
  config.seed_base = opt.seed_base;
  config.validate();
  return config;
}

inline void apply_sweep_value(MiConfig<double>& config, const std::string& param,
                              double value) {
  if (param == "alpha") {
    config.params.alpha = value;
  } else if (param == "sigma") {
    config.params.sigma = value;
  } else if (param == "gamma") {
    config.params.gamma = value;
  } else if (param == "beta") {
    config.beta = value;
  } else if (param == "m") {
    config.m = static_cast<int>(std::llround(value));
  } else {
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected alpha|sigma|gamma|beta|m)");
  }
  config.validate();
}

inline nlohmann::json ensemble_manifest(const EnsembleOptions& opt) {
  nlohmann::json j{
      {"version", kVersion},
      {"command", "ensemble"},
      {"prng", kPrngAlgorithm},
      {"grid", {{"length", opt.length}, {"node_count", opt.nodes}}},
      {"params",
       {{"alpha", opt.alpha}, {"sigma", opt.sigma}, {"gamma", opt.gamma}, {"dt", opt.dt}}},
      {"initial", {{"m", opt.m}, {"beta", opt.beta}}},
      {"ensemble",
       {{"t_adjust", opt.t_adjust},
        {"t_end", opt.t_end},
        {"sample_stride", resolve_sample_stride(opt)},
        {"samples_target", opt.samples_target},
        {"members", opt.members},
        {"seed_base", opt.seed_base},
        {"jobs", opt.jobs}}},
      {"histogram", {{"min", 0.0}, {"max", 5.0}, {"bin_width", 0.1}}},
  };
  if (!opt.sweep_param.empty()) {
    j["sweep"] = {{"param", opt.sweep_param}, {"values", opt.sweep_values}};
  }
  return j;
}

inline EnsembleOptions ensemble_options_from_manifest(const nlohmann::json& j) {
  if (j.at("command").get<std::string>() != "ensemble") {
    throw ConfigError("manifest does not describe an ensemble run");
  }
  EnsembleOptions opt;
  opt.length = j.at("grid").at("length").get<double>();
  opt.nodes = j.at("grid").at("node_count").get<Eigen::Index>();
  opt.alpha = j.at("params").at("alpha").get<double>();
  opt.sigma = j.at("params").at("sigma").get<double>();
  opt.gamma = j.at("params").at("gamma").get<double>();
  opt.dt = j.at("params").at("dt").get<double>();
  opt.m = j.at("initial").at("m").get<int>();
  opt.beta = j.at("initial").at("beta").get<double>();
  opt.t_adjust = j.at("ensemble").at("t_adjust").get<double>();
  opt.t_end = j.at("ensemble").at("t_end").get<double>();
  opt.sample_stride = j.at("ensemble").at("sample_stride").get<Eigen::Index>();
  opt.samples_target = 0.0;  // stride in the manifest is already resolved
  opt.members = j.at("ensemble").at("members").get<int>();
  opt.seed_base = j.at("ensemble").at("seed_base").get<std::uint64_t>();
  opt.jobs = j.at("ensemble").at("jobs").get<int>();
  if (j.contains("sweep")) {
    opt.sweep_param = j.at("sweep").at("param").get<std::string>();
    opt.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
  }
  return opt;
}

inline void write_histogram_csv(const std::filesystem::path& path,
                                const AmplitudeHistogram<double>& hist) {
  std::ofstream out = open_output(path);
  out << "bin_lo,bin_hi,count,probability\n";
  for (Eigen::Index b = 0; b < hist.counts.size(); ++b) {
    out << format_g17(hist.bin_edges[b]) << ',' << format_g17(hist.bin_edges[b + 1])
        << ',' << hist.counts[b] << ',' << format_g17(hist.probabilities[b]) << '\n';
  }
}

struct EnsembleSweepPoint {
  std::string param;
  double value{};
  AmplitudeHistogram<double> histogram;
  std::int64_t samples{};
};

/// Runs the ensemble (one run per sweep value, or the baseline alone), writing
/// one histogram CSV per run, a summary CSV, and the manifest.
inline std::vector<EnsembleSweepPoint> run_ensemble_command(const EnsembleOptions& opt) {
  if (!opt.sweep_param.empty() && opt.sweep_values.empty()) {
    throw ConfigError("sweep over '" + opt.sweep_param + "' has no values");
  }
  const std::filesystem::path dir(opt.out_dir);
  ensure_directory(dir);

  std::vector<EnsembleSweepPoint> points;
  std::vector<std::pair<std::string, double>> runs;
  if (opt.sweep_param.empty()) {
    runs.emplace_back("baseline", 0.0);
  } else {
    for (const double v : opt.sweep_values) runs.emplace_back(opt.sweep_param, v);
  }

  std::ofstream summary = open_output(dir / "summary.csv");
  summary << "param,value,significant_height,rogue_threshold,rogue_probability,samples\n";
  for (const auto& [param, value] : runs) {
    MiConfig<double> config = ensemble_config(opt);
    std::string label = param;
    if (param != "baseline") {
      apply_sweep_value(config, param, value);
      label += "_" + format_compact(value);
    }
    MemberObserverFactory<double> dump;
    if (!opt.snapshot_dir.empty()) {
      const std::filesystem::path snap_dir = std::filesystem::path(opt.snapshot_dir) / label;
      ensure_directory(snap_dir);
      dump = [snap_dir](int member) -> FieldObserver<double> {
        auto count = std::make_shared<int>(0);
        return [snap_dir, member, count](const WaveField<double>& f) {
          char name[48];
          std::snprintf(name, sizeof(name), "member_%03d_snapshot_%06d.csv", member,
                        (*count)++);
          write_snapshot_csv(snap_dir / name, f);
        };
      };
    }
    const EnsembleResult<double> result = run_ensemble(config, opt.jobs, dump);
    write_histogram_csv(dir / ("histogram_" + label + ".csv"), result.histogram);
    summary << param << ',' << format_g17(value) << ','
            << format_g17(result.histogram.significant_height) << ','
            << format_g17(result.histogram.rogue_threshold) << ','
            << format_g17(result.histogram.rogue_probability) << ','
            << result.histogram.total_samples << '\n';
    points.push_back(EnsembleSweepPoint{param, value, result.histogram,
                                        result.histogram.total_samples});
  }
  summary.close();
  std::ofstream manifest = open_output(dir / "manifest.json");
  manifest << ensemble_manifest(opt).dump(2) << '\n';
  return points;
}

}  // namespace nqho
