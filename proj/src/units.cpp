#include "qcorr/units.hpp"

#include <array>
#include <cmath>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

double mass_kg(const SpeciesParams& s) { return s.mass_amu * constants::atomic_mass_unit; }
double sigma_m(const SpeciesParams& s) { return s.sigma_nm * constants::nanometre; }
double eps_joule(const SpeciesParams& s) { return s.eps_over_kB * constants::boltzmann; }

// Helium and argon: standard cryogenic LJ fits. Neon uses a literature LJ
// set that is not tied to the other two; override it through the config.
const std::array<SpeciesParams, 3> kBuiltins = {{
    {"helium", 4.003, 10.22, 0.2556, Statistics::boson},
    {"argon", 39.948, 124.0, 0.3418, Statistics::boson},
    {"neon", 20.180, 36.68, 0.2782, Statistics::boson},
}};

}  // namespace

std::string to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

Statistics parse_statistics(std::string_view text) {
  if (text == "boson" || text == "bose" || text == "+") return Statistics::boson;
  if (text == "fermion" || text == "fermi" || text == "-") return Statistics::fermion;
  throw LookupError("unknown statistics '" + std::string(text) + "' (expected boson or fermion)");
}

void SpeciesParams::validate() const {
  if (!(mass_amu > 0.0)) throw DomainError("species '" + name + "': mass must be positive");
  if (!(eps_over_kB > 0.0)) throw DomainError("species '" + name + "': eps/k_B must be positive");
  if (!(sigma_nm > 0.0)) throw DomainError("species '" + name + "': sigma must be positive");
}

void StatePoint::validate() const {
  if (!(t_reduced > 0.0)) throw DomainError("reduced temperature must be positive");
  if (!(rho_reduced >= 0.0)) throw DomainError("reduced density must be non-negative");
}

double thermal_wavelength(const SpeciesParams& species, const StatePoint& state) {
  species.validate();
  if (!(state.t_reduced > 0.0)) throw DomainError("reduced temperature must be positive");
  const double kT = state.t_reduced * eps_joule(species);
  const double lambda = constants::planck / std::sqrt(2.0 * constants::pi * mass_kg(species) * kT);
  return lambda / sigma_m(species);
}

DerivedScales derive_scales(const SpeciesParams& species, const StatePoint& state) {
  return {thermal_wavelength(species, state), state.beta()};
}

double hbar_squared_reduced(const SpeciesParams& species) {
  species.validate();
  const double s = sigma_m(species);
  return constants::hbar * constants::hbar / (mass_kg(species) * s * s * eps_joule(species));
}

SpeciesParams builtin_species(std::string_view name) {
  for (const auto& s : kBuiltins)
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : kBuiltins) known += (known.empty() ? "" : ", ") + s.name;
  throw LookupError("unknown species '" + std::string(name) + "'; known species: " + known);
}

std::vector<std::string> builtin_species_names() {
  std::vector<std::string> out;
  for (const auto& s : kBuiltins) out.push_back(s.name);
  return out;
}

double temperature_si(const SpeciesParams& s, double t) { return t * s.eps_over_kB; }
double temperature_reduced(const SpeciesParams& s, double k) { return k / s.eps_over_kB; }

double number_density_si(const SpeciesParams& s, double rho) {
  const double sg = sigma_m(s);
  return rho / (sg * sg * sg);
}
double number_density_reduced(const SpeciesParams& s, double n) {
  const double sg = sigma_m(s);
  return n * sg * sg * sg;
}

double pressure_si(const SpeciesParams& s, double p) {
  const double sg = sigma_m(s);
  return p * eps_joule(s) / (sg * sg * sg);
}
double pressure_reduced(const SpeciesParams& s, double pa) {
  const double sg = sigma_m(s);
  return pa * sg * sg * sg / eps_joule(s);
}

double length_si(const SpeciesParams& s, double r) { return r * sigma_m(s); }
double length_reduced(const SpeciesParams& s, double m) { return m / sigma_m(s); }

}  // namespace qcorr
