#include <cmath>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/potential.hpp"
#include "qcorr/quadrature.hpp"

using namespace qcorr;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("LJ values at landmark separations") {
  const LennardJones lj;
  CHECK(lj.u(1.0) == 0.0);
  CHECK(std::abs(lj.u(std::pow(2.0, 1.0 / 6.0)) + 1.0) < 1e-14);
  CHECK(std::abs(lj.u(2.0) - 4.0 * (std::pow(2.0, -12) - std::pow(2.0, -6))) < 1e-16);
  CHECK(std::abs(lj.u(2.0) + 0.061523) < 1e-6);
  CHECK(std::abs(lj.du(std::pow(2.0, 1.0 / 6.0))) < 1e-13);
}

TEST_CASE("derivatives against finite differences") {
  const LennardJones lj;
  const double h = 1e-5;
  for (double r : {0.9, 1.1, 1.5, 2.5}) {
    const double fd1 = (lj.u(r + h) - lj.u(r - h)) / (2.0 * h);
    const double fd2 = (lj.u(r + h) - 2.0 * lj.u(r) + lj.u(r - h)) / (h * h);
    CHECK(rel(lj.du(r), fd1) < 1e-6);
    CHECK(rel(lj.d2u(r), fd2) < 1e-4);
  }
}

TEST_CASE("squared-distance helpers agree with the checked forms") {
  const LennardJones lj;
  for (double r : {0.85, 1.0, 1.3, 3.1}) {
    CHECK(std::abs(lj.u_r2(r * r) - lj.u(r)) < 1e-14 * std::max(1.0, std::abs(lj.u(r))));
    CHECK(rel(lj.r_du_r2(r * r), r * lj.du(r)) < 1e-14);
  }
}

TEST_CASE("non-positive separations are rejected") {
  const LennardJones lj;
  CHECK_THROWS_AS(lj.u(0.0), DomainError);
  CHECK_THROWS_AS(lj.du(-1.0), DomainError);
  CHECK_THROWS_AS(lj.d2u(0.0), DomainError);
  CHECK_THROWS_AS(LennardJones(1.0, 1.0, 0.9), DomainError);
}

TEST_CASE("dimensional scaling under eps and sigma") {
  const LennardJones unit;
  const LennardJones scaled(2.5, 1.7);
  for (double x : {0.95, 1.2, 2.0}) {
    const double r = 1.7 * x;
    CHECK(rel(scaled.u(r), 2.5 * unit.u(x)) < 1e-13);
    CHECK(rel(scaled.du(r), 2.5 / 1.7 * unit.du(x)) < 1e-13);
    CHECK(rel(scaled.d2u(r), 2.5 / (1.7 * 1.7) * unit.d2u(x)) < 1e-13);
  }
}

TEST_CASE("energy and pressure tails match quadrature of the full potential") {
  const LennardJones lj(1.0, 1.0, 2.5);
  const double rho = 0.7, rc = 2.5;
  // Substitute q = rc / s, s in (0, 1].
  const auto rule = gauss_legendre(200, 0.0, 1.0);
  double e = 0.0, p = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = rule.nodes[i];
    const double q = rc / s;
    const double jac = rc / (s * s);
    e += rule.weights[i] * jac * q * q * lj.u(q);
    p += rule.weights[i] * jac * q * q * q * lj.du(q);
  }
  e *= 2.0 * M_PI * rho;
  p *= -2.0 * M_PI * rho * rho / 3.0;
  CHECK(rel(lj.energy_tail_per_particle(rho), e) < 1e-10);
  CHECK(rel(lj.pressure_tail(rho), p) < 1e-10);
}

TEST_CASE("laplacian tail") {
  CHECK(laplacian_tail(0.0, 3.5, 0.3) == 0.0);
  CHECK(std::abs(laplacian_tail(0.5, 7.0, 0.3) * 32.0 / laplacian_tail(0.5, 3.5, 0.3) - 1.0) < 1e-14);
  CHECK_THROWS_AS(laplacian_tail(0.5, 2.0, 1.0), DomainError);

  // -(prefactor) 4 pi rho^2 int_rc^inf q^2 [u'' + 2u'/q] dq with u = -4/q^6.
  for (double rc : {2.5, 3.5, 5.0}) {
    const double rho = 0.8, pref = 0.37;
    const auto rule = gauss_legendre(120, 0.0, 1.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double s = rule.nodes[i];
      const double q = rc / s;
      const double d1 = 24.0 / std::pow(q, 7), d2 = -168.0 / std::pow(q, 8);
      integral += rule.weights[i] * rc / (s * s) * q * q * (d2 + 2.0 * d1 / q);
    }
    const double expected = -pref * 4.0 * M_PI * rho * rho * integral;
    CHECK(expected > 0.0);
    CHECK(rel(laplacian_tail(rho, rc, pref), expected) < 1e-10);
  }
}

TEST_CASE("full-potential laplacian integral beyond the cutoff differs only by the repulsive branch") {
  const LennardJones lj;
  const double rc = 3.0, rho = 1.0, pref = 1.0;
  const auto rule = gauss_legendre(200, 0.0, 1.0);
  double full = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = rule.nodes[i];
    const double q = rc / s;
    full += rule.weights[i] * rc / (s * s) * q * q * (lj.d2u(q) + 2.0 * lj.du(q) / q);
  }
  full *= -pref * 4.0 * M_PI * rho * rho;
  // repulsive part: 4/q^12 gives q^2 [u'' + 2u'/q] = 4 * 132 / q^12, integral 48 / rc^11
  const double repulsive = -pref * 4.0 * M_PI * 4.0 * 132.0 / (11.0 * std::pow(rc, 11));
  CHECK(std::abs(full - (laplacian_tail(rho, rc, pref) + repulsive)) < 1e-10);
  CHECK(std::abs(repulsive) < 5e-3 * laplacian_tail(rho, rc, pref));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 15);
  CHECK(rel(s, std::pow(2.0, 16) / 16.0) < 1e-13);
  for (std::size_t i = 1; i < rule.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
}
