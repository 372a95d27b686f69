// Command-line front end: sweep, table1, ideal-check, hnc-dump.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcorr/cli_runner.hpp"
#include "qcorr/errors.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// A flag that mirrors one config key.
struct Mirror {
  const char* flag;
  const char* section;
  const char* key;
  const char* help;
  std::string value;
  CLI::Option* option = nullptr;
};

std::vector<Mirror> mirrors() {
  return {
      {"--species", "species", "name", "builtin species (helium, argon, neon)", {}},
      {"--mass-amu", "species", "mass_amu", "particle mass in amu", {}},
      {"--eps-over-kb", "species", "eps_over_kB", "well depth eps/k_B in K", {}},
      {"--sigma-nm", "species", "sigma_nm", "core diameter in nm", {}},
      {"--statistics", "species", "statistics", "boson or fermion", {}},
      {"--tstar", "state", "temperatures", "T* list or start:stop:step", {}},
      {"--rho", "state", "densities", "rho* list or start:stop:step", {}},
      {"--output,-o", "run", "output", "output CSV path (default stdout)", {}},
      {"--corrections", "run", "corrections", "subset of classical,o12_pair,o12_triplet,o20,o21,o30", {}},
      {"--jobs,-j", "run", "jobs", "worker threads", {}},
      {"--grid-points", "solver", "grid_points", "radial grid size (power of two)", {}},
      {"--grid-spacing", "solver", "grid_spacing", "radial grid spacing in sigma", {}},
      {"--mixing", "solver", "mixing", "Picard mixing fraction", {}},
      {"--tol", "solver", "tol", "sup-norm convergence threshold", {}},
      {"--max-iter", "solver", "max_iter", "iteration cap per solve", {}},
      {"--rho-ramp", "solver", "rho_ramp", "warm-start densities", {}},
      {"--cooling-start", "solver", "cooling_start", "temperature of the compression leg", {}},
      {"--liquid-anchor", "solver", "liquid_anchor", "density of the cooling leg", {}},
      {"--triplet-radial-nodes", "solver", "triplet_radial_nodes", "Gauss-Legendre nodes per radius", {}},
      {"--triplet-angular-nodes", "solver", "triplet_angular_nodes", "Gauss-Legendre nodes in cos(angle)", {}},
      {"--triplet-q-max", "solver", "triplet_q_max", "outer radius of the triplet integrals", {}},
      {"--mc-species", "mc", "species", "species list for table1", {}},
      {"--mc-sizes", "mc", "sizes", "particle counts for table1", {}},
      {"--mc-tstar", "mc", "temperature", "table1 temperature", {}},
      {"--mc-rho", "mc", "density", "table1 density", {}},
      {"--mc-blocks", "mc", "n_blocks", "number of blocks", {}},
      {"--mc-configs", "mc", "configs_per_block", "configurations per block", {}},
      {"--mc-steps", "mc", "steps_per_atom", "trial moves per atom between samples", {}},
      {"--mc-equilibration", "mc", "equilibration_sweeps", "equilibration sweeps", {}},
      {"--mc-seed", "mc", "seed", "random seed", {}},
      {"--mc-momenta", "mc", "momentum_samples", "momentum draws per configuration", {}},
      {"--mc-rcut", "mc", "r_cut", "potential cutoff in sigma", {}},
      {"--blocks-csv", "mc", "blocks_csv", "prefix for per-block CSV dumps", {}},
  };
}

// Writes to the configured path, or stdout when none is set.
template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw qcorr::IoError("cannot write '" + path + "'");
  write(out);
  out.flush();
  if (!out) throw qcorr::IoError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum corrections for the Lennard-Jones fluid"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config,-c", config_path, "key = value config file");
  auto flags = mirrors();
  for (auto& m : flags) m.option = app.add_option(m.flag, m.value, m.help);

  auto* sweep = app.add_subcommand("sweep", "HNC isotherm sweep with quantum corrections");
  auto* table1 = app.add_subcommand("table1", "Monte Carlo estimator table");
  auto* ideal = app.add_subcommand("ideal-check", "ideal quantum gas oracles");
  auto* dump = app.add_subcommand("hnc-dump", "g(r), h(r), c(r) at the first (T*, rho*)");

  CLI11_PARSE(app, argc, argv);

  qcorr::RunConfig config;
  try {
    config.jobs = qcorr::default_jobs();
    if (!config_path.empty()) config = qcorr::load_config(config_path, config);
    for (const auto& m : flags)
      if (m.option->count() > 0) qcorr::apply_setting(config, m.section, m.key, m.value);
  } catch (const qcorr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcorr::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (*ideal) {
      const auto t0 = std::chrono::steady_clock::now();
      const bool ok = qcorr::run_ideal_check(std::cout);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("ideal-check %s in %.2f s\n", ok ? "passed" : "FAILED", secs);
      return ok ? 0 : kExitCheckFailed;
    }
    if (*sweep) {
      const auto rows = qcorr::run_sweep(config);
      emit(config.output_path, [&](std::ostream& os) { qcorr::write_sweep_csv(os, rows); });
      return 0;
    }
    if (*table1) {
      const auto rows = qcorr::run_table1(config);
      emit(config.output_path, [&](std::ostream& os) { qcorr::write_table1_csv(os, rows); });
      return 0;
    }
    if (*dump) {
      if (config.temperatures.empty() || config.densities.empty())
        throw qcorr::ConfigError("hnc-dump needs --tstar and --rho");
      const qcorr::StatePoint st{config.temperatures.front(), config.densities.front()};
      const qcorr::RadialGrid grid(config.grid_points, config.grid_spacing);
      qcorr::PairFunctions pf;
      try {
        pf = qcorr::solve_hnc(st, grid, config.solver);
      } catch (const std::runtime_error& e) {
        std::cerr << "no HNC solution: " << e.what() << '\n';
        return kExitCheckFailed;
      }
      emit(config.output_path, [&](std::ostream& os) { qcorr::write_pair_functions_csv(os, pf); });
      return 0;
    }
  } catch (const qcorr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qcorr::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
