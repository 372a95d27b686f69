#include "qcorr/cli_runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "qcorr/errors.hpp"
#include "qcorr/ideal_gas.hpp"

namespace qcorr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double to_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("not a number: '" + std::string(text) + "'");
  return v;
}

long long to_integer(std::string_view text) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  return v;
}

int to_int(std::string_view text) {
  const long long v = to_integer(text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("integer out of range: '" + std::string(text) + "'");
  return static_cast<int>(v);
}

std::vector<std::string> to_names(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : split(text, ','))
    if (!part.empty()) out.emplace_back(part);
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

// Runs task(i) for i in [0, n) on up to jobs threads and rethrows the first
// failure after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

McParams& mc_of(RunConfig& config) {
  if (!config.mc) config.mc.emplace();
  return *config.mc;
}

}  // namespace

bool RunConfig::wants(std::string_view correction) const {
  return std::find(corrections.begin(), corrections.end(), correction) != corrections.end();
}

int default_jobs() {
  if (const char* env = std::getenv("QCORR_JOBS")) {
    try {
      const int n = to_int(env);
      if (n >= 1) return n;
    } catch (const ConfigError&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + std::string(text) + "'");
    const double start = to_double(parts[0]), stop = to_double(parts[1]), step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("range has too many points");
    for (long long i = 0; i < count; ++i) {
      // Round away the accumulated binary noise so 0.1 steps print as such.
      const double v = start + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  for (auto part : split(text, ','))
    if (!part.empty()) out.push_back(to_double(part));
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

void apply_setting(RunConfig& config, std::string_view section, std::string_view key, std::string_view value,
                   int line) {
  const std::string k(key);
  try {
    if (section.empty() || section == "run") {
      if (key == "output") {
        config.output_path = std::string(value);
      } else if (key == "corrections") {
        auto names = to_names(value);
        for (const auto& n : names)
          if (std::find(kCorrectionNames.begin(), kCorrectionNames.end(), n) == kCorrectionNames.end())
            throw ConfigError("unknown correction '" + n + "'");
        config.corrections = std::move(names);
      } else if (key == "jobs") {
        config.jobs = to_int(value);
        if (config.jobs < 1) throw ConfigError("jobs must be at least 1");
      } else {
        throw ConfigError("unknown key");
      }
    } else if (section == "species") {
      if (key == "name") {
        config.species = builtin_species(trim(value));
      } else if (key == "mass_amu") {
        config.species.mass_amu = to_double(value);
      } else if (key == "eps_over_kB") {
        config.species.eps_over_kB = to_double(value);
      } else if (key == "sigma_nm") {
        config.species.sigma_nm = to_double(value);
      } else if (key == "statistics") {
        config.species.statistics = parse_statistics(trim(value));
      } else {
        throw ConfigError("unknown key");
      }
    } else if (section == "state") {
      if (key == "temperatures") {
        config.temperatures = parse_number_list(value);
      } else if (key == "densities") {
        config.densities = parse_number_list(value);
      } else {
        throw ConfigError("unknown key");
      }
    } else if (section == "solver") {
      if (key == "grid_points") {
        config.grid_points = static_cast<std::size_t>(to_int(value));
      } else if (key == "grid_spacing") {
        config.grid_spacing = to_double(value);
      } else if (key == "mixing") {
        config.solver.mixing = to_double(value);
      } else if (key == "tol") {
        config.solver.tol = to_double(value);
      } else if (key == "max_iter") {
        config.solver.max_iter = to_int(value);
      } else if (key == "rho_ramp") {
        config.solver.rho_ramp = parse_number_list(value);
      } else if (key == "cooling_start") {
        config.solver.cooling_start = to_double(value);
      } else if (key == "cooling_density") {
        config.solver.cooling_density = to_double(value);
      } else if (key == "liquid_anchor") {
        config.solver.liquid_anchor = to_double(value);
      } else if (key == "triplet_radial_nodes") {
        config.quad.radial_nodes = to_int(value);
      } else if (key == "triplet_angular_nodes") {
        config.quad.angular_nodes = to_int(value);
      } else if (key == "triplet_q_max") {
        config.quad.q_max = to_double(value);
      } else {
        throw ConfigError("unknown key");
      }
    } else if (section == "mc") {
      if (key == "species") {
        config.mc_species = to_names(value);
        for (const auto& s : config.mc_species) builtin_species(s);
        mc_of(config);
      } else if (key == "sizes") {
        config.mc_sizes.clear();
        for (auto part : split(value, ','))
          if (!part.empty()) config.mc_sizes.push_back(to_int(part));
        if (config.mc_sizes.empty()) throw ConfigError("empty list");
        mc_of(config);
      } else if (key == "temperature") {
        config.mc_temperature = to_double(value);
      } else if (key == "density") {
        config.mc_density = to_double(value);
      } else if (key == "n_blocks") {
        mc_of(config).n_blocks = to_int(value);
      } else if (key == "configs_per_block") {
        mc_of(config).configs_per_block = to_int(value);
      } else if (key == "steps_per_atom") {
        mc_of(config).steps_per_atom_between_samples = to_int(value);
      } else if (key == "equilibration_sweeps") {
        mc_of(config).equilibration_sweeps = to_int(value);
      } else if (key == "max_displacement") {
        mc_of(config).max_displacement = to_double(value);
      } else if (key == "r_cut") {
        mc_of(config).r_cut = to_double(value);
      } else if (key == "seed") {
        const long long seed = to_integer(value);
        if (seed < 0) throw ConfigError("seed must be non-negative");
        mc_of(config).seed = static_cast<std::uint64_t>(seed);
      } else if (key == "momentum_samples") {
        mc_of(config).momentum_samples_per_config = to_int(value);
      } else if (key == "rdf_bin_width") {
        mc_of(config).rdf_bin_width = to_double(value);
      } else if (key == "blocks_csv") {
        config.blocks_csv_prefix = std::string(trim(value));
      } else {
        throw ConfigError("unknown key");
      }
    } else {
      throw ConfigError("unknown section [" + std::string(section) + "]");
    }
  } catch (const ConfigError& e) {
    const std::string where = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    throw ConfigError(where + "key '" + k + "': " + e.what(), line, k);
  } catch (const std::exception& e) {
    // Unknown species or statistics names.
    const std::string where = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    throw ConfigError(where + "key '" + k + "': " + e.what(), line, k);
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header", line);
      section = std::string(trim(text.substr(1, text.size() - 2)));
      static const std::vector<std::string> known = {"run", "species", "state", "solver", "mc"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key = value", line);
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key", line);
    apply_setting(base, section, key, trim(text.substr(eq + 1)), line);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

namespace {

void validate_sweep(const RunConfig& config) {
  if (config.temperatures.empty()) throw ConfigError("no temperatures given", 0, "temperatures");
  if (config.densities.empty()) throw ConfigError("no densities given", 0, "densities");
  for (double t : config.temperatures)
    if (!(t > 0.0)) throw ConfigError("temperatures must be positive", 0, "temperatures");
  for (double r : config.densities)
    if (!(r > 0.0)) throw ConfigError("densities must be positive", 0, "densities");
  try {
    config.species.validate();
    RadialGrid grid(config.grid_points, config.grid_spacing);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

CorrectionReport report_for(const RunConfig& config, const PairFunctions& pf, const StatePoint& st) {
  CorrectionReport row{st.t_reduced, st.rho_reduced, "converged", {}, {}, {}, {}, {}, {}, {}};
  const double lambda = thermal_wavelength(config.species, st);
  const TripletModel triplet(pf);
  row.lambda_over_sigma = lambda;
  if (config.wants("classical")) row.beta_p_classical = virial_pressure(pf, st);
  if (config.wants("o12_pair"))
    row.o12_pair = omega_1_2(pf, triplet, st, config.species, Omega12Form::pair_only, config.quad);
  if (config.wants("o12_triplet"))
    row.o12_triplet = omega_1_2(pf, triplet, st, config.species, Omega12Form::with_triplet, config.quad);
  if (config.wants("o20")) row.o20 = omega_2_0(pf, lambda, st.rho_reduced, config.species.statistics);
  if (config.wants("o21")) row.o21 = omega_2_1(pf, st, config.species, config.species.statistics);
  if (config.wants("o30")) row.o30 = omega_3_0(pf, triplet, lambda, st.rho_reduced, config.quad);
  return row;
}

std::vector<CorrectionReport> trace_isotherm(const RunConfig& config, double t) {
  std::vector<double> rhos = config.densities;
  std::sort(rhos.begin(), rhos.end());
  rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
  const std::size_t n = rhos.size();
  const RadialGrid grid(config.grid_points, config.grid_spacing);
  const SolverOptions& opts = config.solver;
  std::vector<std::optional<CorrectionReport>> rows(n);

  std::optional<PairFunctions> prev;
  StatePoint prev_state;
  const auto solve = [&](std::size_t i) {
    const StatePoint st{t, rhos[i]};
    std::optional<PairFunctions> pf;
    if (prev) {
      // Picard slows down sharply at high density, so a failed warm step is
      // retried from scratch before the branch is declared finished.
      try {
        pf = solve_hnc_from(*prev, prev_state, st, opts);
      } catch (const std::runtime_error&) {
      }
    }
    if (!pf) pf = solve_hnc(st, grid, opts);
    rows[i] = report_for(config, *pf, st);
    prev = std::move(pf);
    prev_state = st;
  };

  // Gas side, upwards. Below cooling_start only dilute states belong here.
  const bool subcritical = t < opts.cooling_start;
  std::size_t gas_end = 0;
  for (; gas_end < n; ++gas_end) {
    if (subcritical && rhos[gas_end] > opts.cooling_density) break;
    try {
      solve(gas_end);
    } catch (const std::runtime_error&) {
      break;
    }
  }

  // Liquid side, downwards from the densest state. Until one point converges
  // each is tried on its own; after that the branch ends at the first point
  // that neither continuation nor a fresh solve can reach.
  prev.reset();
  for (std::size_t i = n; i-- > gas_end;) {
    try {
      solve(i);
    } catch (const std::runtime_error&) {
      if (prev) break;
    }
  }

  std::vector<CorrectionReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) {
      out.push_back(*rows[i]);
    } else {
      out.push_back({t, rhos[i], "spinodal", {}, {}, {}, {}, {}, {}, {}});
    }
  }
  return out;
}

}  // namespace

std::vector<CorrectionReport> run_sweep(const RunConfig& config) {
  validate_sweep(config);
  std::vector<double> temps = config.temperatures;
  std::sort(temps.begin(), temps.end());
  temps.erase(std::unique(temps.begin(), temps.end()), temps.end());

  std::vector<std::vector<CorrectionReport>> per_isotherm(temps.size());
  parallel_for(temps.size(), config.jobs, [&](std::size_t i) { per_isotherm[i] = trace_isotherm(config, temps[i]); });

  std::vector<CorrectionReport> rows;
  for (auto& iso : per_isotherm) rows.insert(rows.end(), iso.begin(), iso.end());
  std::sort(rows.begin(), rows.end(), [](const CorrectionReport& a, const CorrectionReport& b) {
    return a.t_star != b.t_star ? a.t_star < b.t_star : a.rho_star < b.rho_star;
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<CorrectionReport>& rows) {
  os << "T_star,rho_star,status,beta_p_classical,o12_pair,o12_triplet,o20,o21,o30,lambda_over_sigma\n";
  for (const auto& r : rows) {
    os << format_double(r.t_star) << ',' << format_double(r.rho_star) << ',' << r.status << ','
       << format_optional(r.beta_p_classical) << ',' << format_optional(r.o12_pair) << ','
       << format_optional(r.o12_triplet) << ',' << format_optional(r.o20) << ',' << format_optional(r.o21) << ','
       << format_optional(r.o30) << ',' << format_optional(r.lambda_over_sigma) << '\n';
  }
}

std::vector<Table1Row> run_table1(const RunConfig& config) {
  if (!config.mc) throw ConfigError("table1 needs an [mc] section", 0, "mc");
  if (config.mc_species.empty() || config.mc_sizes.empty()) throw ConfigError("table1 needs species and sizes");
  std::vector<SpeciesParams> species;
  for (const auto& name : config.mc_species) {
    try {
      species.push_back(builtin_species(name));
    } catch (const LookupError& e) {
      throw ConfigError(e.what(), 0, "species");
    }
  }
  try {
    config.mc->validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), 0, "mc");
  }

  struct Cell {
    std::size_t species;
    int n;
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < species.size(); ++s)
    for (int n : config.mc_sizes) cells.push_back({s, n});

  const StatePoint state{config.mc_temperature, config.mc_density};
  std::vector<std::vector<Table1Row>> out(cells.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    McParams params = *config.mc;
    params.n_particles = cells[i].n;
    const SpeciesParams& sp = species[cells[i].species];
    const McResult r = run_nvt(params, sp, state);
    out[i] = {{sp.name, cells[i].n, "a", r.forms.a},
              {sp.name, cells[i].n, "b", r.forms.b},
              {sp.name, cells[i].n, "c", r.forms.c},
              {sp.name, cells[i].n, "d", r.forms.d},
              {sp.name, cells[i].n, "beta_p", r.pressure}};
    if (!config.blocks_csv_prefix.empty()) {
      const std::string path = config.blocks_csv_prefix + sp.name + "_" + std::to_string(cells[i].n) + ".csv";
      std::ofstream f(path);
      if (!f) throw IoError("cannot write '" + path + "'");
      write_blocks_csv(f, r);
    }
  });

  std::vector<Table1Row> rows;
  for (auto& cell : out) rows.insert(rows.end(), cell.begin(), cell.end());
  return rows;
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
  os << "species,N,form,mean,std_err\n";
  for (const auto& r : rows) {
    os << r.species << ',' << r.n_particles << ',' << r.form << ',';
    if (r.estimate.overflow) {
      os << "-,-\n";
    } else {
      os << format_double(r.estimate.mean) << ',' << format_double(r.estimate.std_err) << '\n';
    }
  }
}

bool run_ideal_check(std::ostream& log) {
  bool ok = true;
  char buf[160];
  for (int l = 2; l <= 4; ++l) {
    const double exact = std::pow(static_cast<double>(l), -2.5);
    double worst = 0.0;
    for (double lambda : {0.1, 1.0, 1.51, 10.0})
      worst = std::max(worst, std::abs(ideal_loop_quadrature(l, lambda) / exact - 1.0));
    const bool pass = worst < 1e-8 && std::abs(ideal_loop_coeff(l, Statistics::boson)) == exact;
    ok = ok && pass;
    std::snprintf(buf, sizeof buf, "%s loop l=%d quadrature vs l^-5/2: max relative error %.3e\n",
                  pass ? "PASS" : "FAIL", l, worst);
    log << buf;
  }
  bool det_ok = true;
  for (int n = 1; n <= 20; ++n)
    det_ok = det_ok && tridiag_det(n) == n + 1 && tridiag_det_elimination(n) == n + 1;
  ok = ok && det_ok;
  log << (det_ok ? "PASS" : "FAIL") << " tridiagonal determinant = n + 1 for n = 1..20\n";
  return ok;
}

}  // namespace qcorr
