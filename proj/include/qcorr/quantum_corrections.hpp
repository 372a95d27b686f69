#pragma once

#include <functional>

#include "qcorr/oz_hnc.hpp"
#include "qcorr/units.hpp"

namespace qcorr {

// Triplet density through Kirkwood superposition:
//   g3(q1, q2, q12) = g(q1) g(q2) g(q12).
class TripletModel {
 public:
  explicit TripletModel(const PairFunctions& pair) : pair_(&pair) {}

  const PairFunctions& pair() const { return *pair_; }
  double g3(double q1, double q2, double q12) const {
    return pair_->g_at(q1) * pair_->g_at(q2) * pair_->g_at(q12);
  }

 private:
  const PairFunctions* pair_;
};

// Tensor-product Gauss-Legendre rule over (q1, q2, x) on (0, q_max)^2 x (-1, 1).
// q_max <= 0 selects max(4 Lambda, 6 sigma).
struct TripletQuadSpec {
  int radial_nodes = 128;
  int angular_nodes = 64;
  double q_max = 0.0;

  double resolved_q_max(double lambda) const;
};

enum class Omega12Form { pair_only, with_triplet };

struct GradSquared {
  double pair = 0.0;
  double triplet = 0.0;
  double total() const { return pair + triplet; }
};

// All quantities below are reduced with eps = sigma = 1 and are densities,
// i.e. already divided by V.

// <Lap U>/V = 4 pi rho^2 int q^2 g [u'' + 2 u'/q] dq.
double mean_laplacian_U(const PairFunctions& pf, double rho);

// <grad U . grad U>/V: pair part 4 pi rho^2 int q^2 g u'^2 dq plus
// 8 pi^2 rho^3 int int int q1^2 q2^2 u'(q1) u'(q2) x g3 dq1 dq2 dx.
// The x integration is over the angle between q1 and q2. Forces are only
// non-negligible within a few sigma, so q_max is at least 6 sigma.
GradSquared mean_gradsq_U(const PairFunctions& pf, const TripletModel& triplet, double rho,
                          const TripletQuadSpec& quad = {});

// -beta Omega_{1,2} sigma^3/V:
//   pair_only:    -(hbar^2 beta^2 / 24 m) <Lap U>/V
//   with_triplet: -(hbar^2 beta^2 / 12 m) <Lap U>/V + (hbar^2 beta^3 / 24 m) <gradU.gradU>/V
double omega_1_2(const PairFunctions& pf, const TripletModel& triplet, const StatePoint& state,
                 const SpeciesParams& species, Omega12Form form, const TripletQuadSpec& quad = {});

// Same, from precomputed averages; hbar2 = hbar^2/(m sigma^2 eps).
double omega_1_2_from_averages(double hbar2, double beta, double mean_laplacian, const GradSquared* gradsq);

// -beta Omega_{2,0} sigma^3/V = +-(4 pi rho^2 / 2) int q^2 exp(-2 pi q^2/Lambda^2) g dq.
double omega_2_0(const PairFunctions& pf, double lambda, double rho, Statistics statistics);

enum class HardCoreMode { exact_erfc, asymptotic };

// Omega_{2,0} for g = step(q - d):
//   exact:      +-(Lambda^2 rho^2 / 2)[d e^{-2 pi d^2/Lambda^2} + (Lambda/sqrt 8) erfc(sqrt(2 pi) d/Lambda)]
//   asymptotic: +-(Lambda^2 d rho^2 / 2) e^{-2 pi d^2/Lambda^2} [1 + Lambda^2/(4 pi d^2)]
// Both erfc and the Gaussian tail enter with a plus sign: integrating
// q^2 e^{-a q^2} by parts adds the remaining Gaussian integral.
double hard_core_dimer(double d, double lambda, double rho, Statistics statistics, HardCoreMode mode);

// -beta Omega_{2,1} sigma^3/V = -+ beta (4 pi rho^2/2) int q^2 g e^{-2 pi q^2/Lambda^2} q u'(q) dq.
double omega_2_1(const PairFunctions& pf, const StatePoint& state, const SpeciesParams& species,
                 Statistics statistics);
double omega_2_1(const PairFunctions& pf, double lambda, double beta, double rho, Statistics statistics);

// -beta Omega_{3,0} sigma^3/V = (8 pi^2 rho^3 / 3) int int int q1^2 q2^2
//   exp(-pi [q1^2 + q2^2 + q12^2]/Lambda^2) g3 dq1 dq2 dx. Same for both statistics.
double omega_3_0(const PairFunctions& pf, const TripletModel& triplet, double lambda, double rho,
                 const TripletQuadSpec& quad = {});

// <K> = 3 N k_B T / 2 + (hbar^2 beta / 24 m) <Lap U>, reduced by eps.
// mean_laplacian is the extensive <Lap U>; hbar2 = hbar^2/(m sigma^2 eps).
double kinetic_energy_average(double n_particles, const StatePoint& state, double hbar2, double mean_laplacian);

}  // namespace qcorr
