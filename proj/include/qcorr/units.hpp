#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qcorr {

// CODATA 2018. h and k_B are exact by definition of the SI.
namespace constants {
inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double pi = 3.141592653589793238462643383;
inline constexpr double hbar = planck / (2.0 * pi);         // J s
inline constexpr double boltzmann = 1.380649e-23;           // J / K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double nanometre = 1e-9;                   // m
}  // namespace constants

enum class Statistics { boson, fermion };

// +1 for bosons, -1 for fermions: the parity factor of an odd permutation.
inline int exchange_sign(Statistics s) { return s == Statistics::boson ? 1 : -1; }

std::string to_string(Statistics s);
Statistics parse_statistics(std::string_view text);

struct SpeciesParams {
  std::string name;
  double mass_amu = 0.0;
  double eps_over_kB = 0.0;  // K
  double sigma_nm = 0.0;
  Statistics statistics = Statistics::boson;

  // Throws DomainError unless mass, well depth and core size are positive.
  void validate() const;
};

// Reduced Lennard-Jones state: T* = k_B T / eps, rho* = rho sigma^3.
struct StatePoint {
  double t_reduced = 1.0;
  double rho_reduced = 0.0;

  double beta() const { return 1.0 / t_reduced; }
  void validate() const;
};

struct DerivedScales {
  double lambda_over_sigma = 0.0;
  double beta_eps = 0.0;
};

// Lambda / sigma with Lambda = h / sqrt(2 pi m k_B T), T = T* eps/k_B.
double thermal_wavelength(const SpeciesParams& species, const StatePoint& state);

DerivedScales derive_scales(const SpeciesParams& species, const StatePoint& state);

// hbar^2 / (m sigma^2 eps); equals (Lambda/sigma)^2 T* / (2 pi) at any T*.
double hbar_squared_reduced(const SpeciesParams& species);

// helium, argon, neon. Throws LookupError naming the known species.
SpeciesParams builtin_species(std::string_view name);
std::vector<std::string> builtin_species_names();

// Reduced <-> SI for the quantities the sweep reports.
double temperature_si(const SpeciesParams& s, double t_reduced);          // K
double temperature_reduced(const SpeciesParams& s, double kelvin);
double number_density_si(const SpeciesParams& s, double rho_reduced);     // 1/m^3
double number_density_reduced(const SpeciesParams& s, double per_m3);
double pressure_si(const SpeciesParams& s, double p_reduced);             // Pa, p* = p sigma^3/eps
double pressure_reduced(const SpeciesParams& s, double pascal);
double length_si(const SpeciesParams& s, double r_reduced);               // m
double length_reduced(const SpeciesParams& s, double metres);

}  // namespace qcorr
