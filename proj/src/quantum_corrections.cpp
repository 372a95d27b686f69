#include "qcorr/quantum_corrections.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/potential.hpp"
#include "qcorr/quadrature.hpp"

namespace qcorr {

namespace {

constexpr double kPi = constants::pi;

// sum_{a,b,x} w_a w_b w_x q_a^2 q_b^2 f(q_a) f(q_b) K(q_a, q_b, x) g(q_ab),
// with q_ab the third side of the triangle. Outer sums in fixed order.
template <class Radial, class Kernel>
double triplet_sum(const PairFunctions& pf, const TripletQuadSpec& quad, double q_max, Radial&& radial,
                   Kernel&& kernel) {
  if (quad.radial_nodes < 1 || quad.angular_nodes < 1) throw DomainError("triplet quadrature needs nodes");
  const auto rq = gauss_legendre(static_cast<std::size_t>(quad.radial_nodes), 0.0, q_max);
  const auto rx = gauss_legendre(static_cast<std::size_t>(quad.angular_nodes), -1.0, 1.0);
  const std::size_t nq = rq.size();
  std::vector<double> outer(nq);
  for (std::size_t a = 0; a < nq; ++a) {
    const double q = rq.nodes[a];
    outer[a] = rq.weights[a] * q * q * radial(q) * pf.g_at(q);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < nq; ++a) {
    if (outer[a] == 0.0) continue;
    const double q1 = rq.nodes[a];
    double row = 0.0;
    for (std::size_t b = 0; b < nq; ++b) {
      if (outer[b] == 0.0) continue;
      const double q2 = rq.nodes[b];
      double inner = 0.0;
      for (std::size_t k = 0; k < rx.size(); ++k) {
        const double x = rx.nodes[k];
        const double q12 = std::sqrt(std::max(0.0, q1 * q1 + q2 * q2 - 2.0 * q1 * q2 * x));
        inner += rx.weights[k] * kernel(q1, q2, x, q12) * pf.g_at(q12);
      }
      row += outer[b] * inner;
    }
    total += outer[a] * row;
  }
  return total;
}

}  // namespace

double TripletQuadSpec::resolved_q_max(double lambda) const {
  if (q_max > 0.0) return q_max;
  return std::max(4.0 * lambda, 6.0);
}

double mean_laplacian_U(const PairFunctions& pf, double rho) {
  const LennardJones lj;
  const double integral = radial_trapezoid(pf.grid, [&](std::size_t j, double r) {
    if (pf.g[j] == 0.0) return 0.0;
    return r * r * pf.g[j] * (lj.d2u(r) + 2.0 * lj.du(r) / r);
  });
  return 4.0 * kPi * rho * rho * integral;
}

GradSquared mean_gradsq_U(const PairFunctions& pf, const TripletModel& triplet, double rho,
                          const TripletQuadSpec& quad) {
  if (&triplet.pair() != &pf) throw DomainError("triplet model is built on a different pair function");
  const LennardJones lj;
  GradSquared out;
  const double pair_integral = radial_trapezoid(pf.grid, [&](std::size_t j, double r) {
    if (pf.g[j] == 0.0) return 0.0;
    const double f = lj.du(r);
    return r * r * pf.g[j] * f * f;
  });
  out.pair = 4.0 * kPi * rho * rho * pair_integral;
  if (rho == 0.0) return out;

  const double q_max = quad.q_max > 0.0 ? quad.q_max : 6.0;
  const auto force = [&](double q) { return lj.du(q); };
  const auto kernel = [](double, double, double x, double) { return x; };
  out.triplet = 8.0 * kPi * kPi * rho * rho * rho * triplet_sum(triplet.pair(), quad, q_max, force, kernel);
  return out;
}

double omega_1_2_from_averages(double hbar2, double beta, double mean_laplacian, const GradSquared* gradsq) {
  if (!gradsq) return -hbar2 * beta * beta / 24.0 * mean_laplacian;
  return -hbar2 * beta * beta / 12.0 * mean_laplacian + hbar2 * beta * beta * beta / 24.0 * gradsq->total();
}

double omega_1_2(const PairFunctions& pf, const TripletModel& triplet, const StatePoint& state,
                 const SpeciesParams& species, Omega12Form form, const TripletQuadSpec& quad) {
  const double hbar2 = hbar_squared_reduced(species);
  const double lap = mean_laplacian_U(pf, state.rho_reduced);
  if (form == Omega12Form::pair_only) return omega_1_2_from_averages(hbar2, state.beta(), lap, nullptr);
  const GradSquared gs = mean_gradsq_U(pf, triplet, state.rho_reduced, quad);
  return omega_1_2_from_averages(hbar2, state.beta(), lap, &gs);
}

double omega_2_0(const PairFunctions& pf, double lambda, double rho, Statistics statistics) {
  if (!(lambda > 0.0)) throw DomainError("thermal wavelength must be positive");
  const double a = 2.0 * kPi / (lambda * lambda);
  const double integral =
      radial_trapezoid(pf.grid, [&](std::size_t j, double r) { return r * r * std::exp(-a * r * r) * pf.g[j]; });
  return exchange_sign(statistics) * 2.0 * kPi * rho * rho * integral;
}

double hard_core_dimer(double d, double lambda, double rho, Statistics statistics, HardCoreMode mode) {
  if (!(d > 0.0)) throw DomainError("core diameter must be positive");
  if (!(lambda > 0.0)) throw DomainError("thermal wavelength must be positive");
  const double sign = exchange_sign(statistics);
  const double l2 = lambda * lambda;
  const double gauss = std::exp(-2.0 * kPi * d * d / l2);
  if (mode == HardCoreMode::exact_erfc) {
    const double tail = lambda / std::sqrt(8.0) * std::erfc(std::sqrt(2.0 * kPi) * d / lambda);
    return sign * 0.5 * l2 * rho * rho * (d * gauss + tail);
  }
  return sign * 0.5 * l2 * d * rho * rho * gauss * (1.0 + l2 / (4.0 * kPi * d * d));
}

double omega_2_1(const PairFunctions& pf, double lambda, double beta, double rho, Statistics statistics) {
  if (!(lambda > 0.0)) throw DomainError("thermal wavelength must be positive");
  const LennardJones lj;
  const double a = 2.0 * kPi / (lambda * lambda);
  const double integral = radial_trapezoid(pf.grid, [&](std::size_t j, double r) {
    if (pf.g[j] == 0.0) return 0.0;
    return r * r * pf.g[j] * std::exp(-a * r * r) * r * lj.du(r);
  });
  return -exchange_sign(statistics) * beta * 2.0 * kPi * rho * rho * integral;
}

double omega_2_1(const PairFunctions& pf, const StatePoint& state, const SpeciesParams& species,
                 Statistics statistics) {
  return omega_2_1(pf, thermal_wavelength(species, state), state.beta(), state.rho_reduced, statistics);
}

double omega_3_0(const PairFunctions& pf, const TripletModel& triplet, double lambda, double rho,
                 const TripletQuadSpec& quad) {
  if (!(lambda > 0.0)) throw DomainError("thermal wavelength must be positive");
  if (&triplet.pair() != &pf) throw DomainError("triplet model is built on a different pair function");
  if (rho == 0.0) return 0.0;
  const double a = kPi / (lambda * lambda);
  const auto radial = [a](double q) { return std::exp(-a * q * q); };
  const auto kernel = [a](double, double, double, double q12) { return std::exp(-a * q12 * q12); };
  const double sum = triplet_sum(triplet.pair(), quad, quad.resolved_q_max(lambda), radial, kernel);
  return 8.0 * kPi * kPi * rho * rho * rho / 3.0 * sum;
}

double kinetic_energy_average(double n_particles, const StatePoint& state, double hbar2, double mean_laplacian) {
  return 1.5 * n_particles * state.t_reduced + hbar2 * state.beta() / 24.0 * mean_laplacian;
}

}  // namespace qcorr
