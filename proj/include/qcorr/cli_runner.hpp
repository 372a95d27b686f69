#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/mc_engine.hpp"
#include "qcorr/oz_hnc.hpp"
#include "qcorr/quantum_corrections.hpp"
#include "qcorr/units.hpp"

namespace qcorr {

// Column names of the sweep CSV that can be switched on or off.
inline const std::vector<std::string> kCorrectionNames = {"classical", "o12_pair", "o12_triplet",
                                                          "o20",       "o21",      "o30"};

struct RunConfig {
  SpeciesParams species = builtin_species("helium");
  std::vector<double> temperatures;
  std::vector<double> densities;
  std::vector<std::string> corrections = kCorrectionNames;
  std::string output_path;  // empty: standard output

  std::size_t grid_points = RadialGrid::kDefaultPoints;
  double grid_spacing = RadialGrid::kDefaultSpacing;
  SolverOptions solver;
  TripletQuadSpec quad;

  // Table 1 runs: every species x particle count, each with mc.
  std::optional<McParams> mc;
  std::vector<std::string> mc_species = {"neon", "helium"};
  std::vector<int> mc_sizes = {250, 500, 1000};
  double mc_temperature = 1.5;
  double mc_density = 0.5;
  std::string blocks_csv_prefix;  // per-block dumps when non-empty

  int jobs = 1;

  bool wants(std::string_view correction) const;
};

// Worker count from QCORR_JOBS, else the hardware concurrency, at least 1.
int default_jobs();

// "0.5, 0.6, 1.0" or "start:stop:step" (stop included).
std::vector<double> parse_number_list(std::string_view text);

// Applies one key = value setting from the given section ("" is the
// top level). Throws ConfigError naming the key and line.
void apply_setting(RunConfig& config, std::string_view section, std::string_view key, std::string_view value,
                   int line = 0);

// Plain-text config: "# comment", "[section]" with section in
// {run, species, state, solver, mc}, and "key = value" lines. Settings are
// applied on top of base.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// One sweep row. Values are absent for points where the solver found no
// solution or the column was not requested.
struct CorrectionReport {
  double t_star = 0.0;
  double rho_star = 0.0;
  std::string status;  // "converged" or "spinodal"
  std::optional<double> beta_p_classical, o12_pair, o12_triplet, o20, o21, o30, lambda_over_sigma;
};

// Solves every (T*, rho*) of the config. Each isotherm follows its gas branch
// upwards from the lowest density and, below the cooling temperature, its
// liquid branch downwards from the highest, warm-starting point to point. A
// failed warm start falls back to a fresh solve; the branch stops at the first
// point where both fail. Isotherms run in parallel on config.jobs
// workers; rows come back sorted by (T*, rho*).
std::vector<CorrectionReport> run_sweep(const RunConfig& config);

void write_sweep_csv(std::ostream& os, const std::vector<CorrectionReport>& rows);

struct Table1Row {
  std::string species;
  int n_particles = 0;
  std::string form;  // a, b, c, d or beta_p
  McEstimate estimate;
};

// NVT runs for every species x size cell, in parallel on config.jobs workers.
std::vector<Table1Row> run_table1(const RunConfig& config);

// species, N, form, mean, std_err; overflowed estimates print "-".
void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows);

// Ideal-gas oracles: ring quadrature against l^(-5/2) for l = 2, 3, 4 at
// 1e-8 relative over several wavelengths, and the tridiagonal determinant
// (recurrence and elimination) against n + 1 for n <= 20. One line per check
// goes to log; returns whether all passed.
bool run_ideal_check(std::ostream& log);

}  // namespace qcorr
