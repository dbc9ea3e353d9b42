// Command-line front end: simulate single trajectories, run the validation
// benchmark, or collect ensemble rogue-oscillation statistics.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nqho/commands.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

std::string default_out_dir() {
  if (const char* env = std::getenv("NQHO_OUT_DIR")) return env;
  return "nqho-out";
}

nlohmann::json load_manifest(const std::string& path) {
  return nlohmann::json::parse(nqho::read_text_file(path));
}

// "PARAM=v1,v2,v3"
void parse_sweep(const std::string& text, nqho::EnsembleOptions& opt) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
    throw nqho::ConfigError("sweep must look like PARAM=v1,v2,... got '" + text + "'");
  }
  opt.sweep_param = text.substr(0, eq);
  opt.sweep_values.clear();
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string token =
        rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      opt.sweep_values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw nqho::ConfigError("bad sweep value '" + token + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step Fourier solver for the nonlinear quantum harmonic "
               "oscillator, with rogue-oscillation statistics"};
  app.require_subcommand(1);

  nqho::SimulateOptions sim;
  std::string sim_stepper = "ssfm";
  std::string sim_manifest;
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory and "
                                                      "write snapshot CSVs");
  simulate->add_option("--alpha", sim.alpha, "trap strength");
  simulate->add_option("--sigma", sim.sigma, "nonlinearity constant");
  simulate->add_option("--gamma", sim.gamma, "dissipation constant");
  simulate->add_option("--m", sim.m, "carrier harmonic (wavenumber m*2pi/L)");
  simulate->add_option("--beta", sim.beta, "noise amplitude");
  simulate->add_option("--L", sim.length, "domain length");
  simulate->add_option("--N", sim.nodes, "grid nodes (even)");
  simulate->add_option("--dt", sim.dt, "time step");
  simulate->add_option("--t-end", sim.t_end, "integration end time");
  simulate->add_option("--seed", sim.seed, "noise seed");
  simulate->add_option("--stepper", sim_stepper, "ssfm or rk4");
  simulate->add_option("--snapshot-every", sim.snapshot_every, "steps between snapshots");
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_option("--from-manifest", sim_manifest,
                       "load the run configuration from an emitted manifest");

  nqho::BenchmarkOptions bench;
  CLI::App* benchmark = app.add_subcommand("benchmark", "run the validation table "
                                                        "(exit 0 iff every row passes)");
  benchmark->add_option("--out", bench.out_dir, "output directory");

  nqho::EnsembleOptions ens;
  std::string ens_sweep;
  std::string ens_manifest;
  CLI::App* ensemble = app.add_subcommand("ensemble", "run seeded ensembles and write "
                                                      "amplitude histograms");
  ensemble->add_option("--alpha", ens.alpha, "trap strength");
  ensemble->add_option("--sigma", ens.sigma, "nonlinearity constant");
  ensemble->add_option("--gamma", ens.gamma, "dissipation constant");
  ensemble->add_option("--m", ens.m, "carrier harmonic");
  ensemble->add_option("--beta", ens.beta, "noise amplitude");
  ensemble->add_option("--L", ens.length, "domain length");
  ensemble->add_option("--N", ens.nodes, "grid nodes (even)");
  ensemble->add_option("--dt", ens.dt, "time step");
  ensemble->add_option("--t-adjust", ens.t_adjust, "time discarded before sampling");
  ensemble->add_option("--t-end", ens.t_end, "integration end time");
  ensemble->add_option("--sample-every", ens.sample_stride, "steps between samples");
  ensemble->add_option("--samples-target", ens.samples_target,
                       "approximate total sample count (overrides --sample-every)");
  ensemble->add_option("--members", ens.members, "ensemble size");
  ensemble->add_option("--seed-base", ens.seed_base, "seed of member 0");
  ensemble->add_option("--sweep", ens_sweep, "PARAM=v1,v2,... one ensemble per value");
  ensemble->add_option("--jobs", ens.jobs, "worker threads across members");
  ensemble->add_option("--out", ens.out_dir, "output directory");
  ensemble->add_option("--snapshot-dir", ens.snapshot_dir,
                       "also write raw member snapshot CSVs under this directory");
  ensemble->add_option("--from-manifest", ens_manifest,
                       "load the run configuration from an emitted manifest");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (!sim_manifest.empty()) {
        const std::string out = sim.out_dir;
        sim = nqho::simulate_options_from_manifest(load_manifest(sim_manifest));
        sim.out_dir = out;
      } else {
        sim.stepper = nqho::parse_stepper(sim_stepper);
      }
      if (sim.out_dir.empty()) sim.out_dir = default_out_dir();
      const int snapshots = nqho::run_simulate_command(sim);
      std::cout << "wrote " << snapshots << " snapshots to " << sim.out_dir << "\n";
    } else if (benchmark->parsed()) {
      if (bench.out_dir.empty()) bench.out_dir = default_out_dir();
      std::vector<nqho::validation::CheckResult> rows;
      const bool ok = nqho::run_benchmark_command(bench, &rows);
      for (const auto& row : rows) {
        std::cout << (row.pass ? "pass  " : "FAIL  ") << row.name
                  << "  metric=" << row.metric << "\n";
      }
      std::cout << (ok ? "benchmark: all rows pass\n" : "benchmark: FAILURES above\n");
      if (!ok) return 1;
    } else if (ensemble->parsed()) {
      const int jobs = ens.jobs;
      if (!ens_manifest.empty()) {
        const std::string out = ens.out_dir;
        ens = nqho::ensemble_options_from_manifest(load_manifest(ens_manifest));
        ens.out_dir = out;
        ens.jobs = jobs;
      } else if (!ens_sweep.empty()) {
        parse_sweep(ens_sweep, ens);
      }
      if (ens.out_dir.empty()) ens.out_dir = default_out_dir();
      const auto points = nqho::run_ensemble_command(ens);
      for (const auto& p : points) {
        std::cout << p.param;
        if (p.param != "baseline") std::cout << "=" << nqho::format_compact(p.value);
        std::cout << ": samples=" << p.samples
                  << " H_s=" << p.histogram.significant_height
                  << " rogue_probability=" << p.histogram.rogue_probability << "\n";
      }
      std::cout << "wrote histograms to " << ens.out_dir << "\n";
    }
  } catch (const nqho::ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const nqho::NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return kExitNumericalError;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "manifest error: " << err.what() << "\n";
    return kExitConfigError;
  }
  return 0;
}
