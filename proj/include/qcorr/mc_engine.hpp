#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "qcorr/potential.hpp"
#include "qcorr/units.hpp"

namespace qcorr {

using Vec3 = std::array<double, 3>;
using Rng = std::mt19937_64;

struct McParams {
  int n_particles = 500;
  int n_blocks = 50;
  int configs_per_block = 100;
  int steps_per_atom_between_samples = 20;
  int equilibration_sweeps = 2000;
  // Starting value; tuned toward 50% acceptance during equilibration and
  // frozen afterwards.
  double max_displacement = 0.15;
  double r_cut = 3.5;
  std::uint64_t seed = 12345;
  int momentum_samples_per_config = 10;
  // g(r) histogram bin width; <= 0 switches the histogram off.
  double rdf_bin_width = 0.02;

  void validate() const;
};

// Periodic cubic box of side box_length, coordinates wrapped into [0, L).
struct Configuration {
  double box_length = 0.0;
  std::vector<Vec3> positions;

  std::size_t size() const { return positions.size(); }
  double volume() const { return box_length * box_length * box_length; }
  double density() const { return static_cast<double>(size()) / volume(); }
};

// First n sites of the smallest 4 k^3 face-centred cubic lattice at density
// rho. Throws InitializationError when neighbouring sites would sit closer
// than 0.8 sigma.
Configuration fcc_lattice(int n, double rho);

struct ConfigObservables {
  double potential_energy = 0.0;
  // sum over pairs of q u'(q)
  double virial = 0.0;
  // sum_{j != k} [u'' + 2 u'/q], including laplacian_tail when truncated
  double laplacian = 0.0;
  double laplacian_tail = 0.0;
  // sum_j |F_j|^2
  double gradsq = 0.0;
  std::vector<Vec3> forces;
};

// Minimum-image pair sums within the potential's cutoff (half the box when
// untruncated), reduced LJ units. Throws StabilityError for any pair closer
// than 0.3 sigma and GeometryError when the cutoff exceeds half the box.
ConfigObservables observables(const Configuration& config, const LennardJones& potential);

// Each component normal with variance m k_B T; reduced with m = eps = 1.
std::vector<Vec3> sample_momenta(Rng& rng, std::size_t n_particles, const StatePoint& state);

struct WTerms {
  // w1 = i * w1_imag
  double w1_imag = 0.0;
  double w2 = 0.0;
};

// Reduced, m = 1, without the hbar factors:
//   w1 = -(i beta^2 / 2) sum_j p_j . grad_j U
//   w2 = (beta^3/6) pp:grad grad U + (beta^3/6) grad U . grad U - (beta^2/4) Lap U
// with pp:grad grad U = sum_{j<k} (p_j - p_k) . H_jk . (p_j - p_k). All three
// are pair sums within the cutoff; Lap U here excludes laplacian_tail.
WTerms w1_w2(const Configuration& config, const LennardJones& potential, const std::vector<Vec3>& momenta,
             double beta);

// Raw per-configuration record kept for the estimators.
struct McSample {
  double energy = 0.0;
  double virial = 0.0;
  double laplacian = 0.0;
  double laplacian_tail = 0.0;
  double gradsq = 0.0;
  std::vector<WTerms> w;
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
  bool overflow = false;
};

struct EstimatorForms {
  McEstimate a, b, c, d;
  // Imaginary part of the cumulant sum; must vanish within noise.
  McEstimate c_imag;
};

struct FormInputs {
  double hbar2 = 0.0;  // hbar^2 / (m sigma^2 eps)
  double beta = 1.0;
  double volume = 1.0;
};

// -beta Omega_{1,2} sigma^3 / V from samples laid out as n_blocks equal
// consecutive blocks:
//   a = hbar^2 [-(beta^2/12) <Lap U> + (beta^3/24) <gradU.gradU>] / V
//   b = -hbar^2 (beta^2/24) <Lap U> / V
//   c = Re D(Delta w) / V, w = hbar w1 + hbar^2 w2 over all momentum draws,
//       plus -(hbar^2 beta^2/12) Lap U_tail / V for the long-range part
//   d = ln <exp y> / V, y = hbar^2 [(beta^3/24) gradU.gradU - (beta^2/12) Lap U]
// Lap U includes the tail and gradU.gradU does not.
// y is the momentum average of the second-order exponent. Each form is
// evaluated per block and the block values averaged; the error is the block
// standard error. The exponential is taken in plain double precision, so d is
// flagged as overflow when a block average leaves the representable range.
EstimatorForms estimator_forms(const std::vector<McSample>& samples, int n_blocks, const FormInputs& in);

struct BlockValue {
  int block = 0;
  std::string estimator;
  double value = 0.0;
};

struct McResult {
  McEstimate pressure;  // beta p sigma^3, tail included
  McEstimate energy_per_particle;
  McEstimate laplacian_density;     // <Lap U>/V
  McEstimate beta_gradsq_density;   // beta <gradU.gradU>/V
  EstimatorForms forms;
  double acceptance = 0.0;
  double max_displacement = 0.0;
  double box_length = 0.0;
  double max_energy_drift = 0.0;  // relative, running tally vs recompute
  std::vector<double> rdf_r, rdf_g;
  std::vector<BlockValue> blocks;
  std::vector<McSample> samples;
  Configuration final_config;
};

// Metropolis NVT run of the truncated (unshifted) LJ fluid. Deterministic for
// a given seed. Throws GeometryError when r_cut exceeds half the box.
McResult run_nvt(const McParams& params, const SpeciesParams& species, const StatePoint& state);

// block_index, estimator, value
void write_blocks_csv(std::ostream& os, const McResult& result);

}  // namespace qcorr
