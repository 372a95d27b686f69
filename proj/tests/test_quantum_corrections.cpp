#include <cmath>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/ideal_gas.hpp"
#include "qcorr/quadrature.hpp"
#include "qcorr/quantum_corrections.hpp"

using namespace qcorr;

namespace {

const PairFunctions& golden() {
  static const PairFunctions pf = solve_hnc({1.5, 0.5}, RadialGrid{}, {});
  return pf;
}

const PairFunctions& cold_liquid() {
  static const PairFunctions pf = solve_hnc({0.8, 0.8}, RadialGrid{}, {});
  return pf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("ideal-gas override reproduces the loop terms") {
  const auto ideal = PairFunctions::ideal(RadialGrid(8192, 0.005));
  const TripletModel tri(ideal);
  for (double lam : {0.5, 1.0, 1.51}) {
    for (double rho : {0.1, 0.6}) {
      const double z = rho * lam * lam * lam;
      const double o20 = omega_2_0(ideal, lam, rho, Statistics::boson);
      CHECK(rel(o20, rho * rho * std::pow(lam, 3) * std::pow(2.0, -2.5)) < 1e-8);
      // z^2 / Lambda^3 times the l = 2 coefficient
      CHECK(rel(o20 * std::pow(lam, 3), z * z * ideal_loop_coeff(2, Statistics::boson)) < 1e-8);
      const double o30 = omega_3_0(ideal, tri, lam, rho);
      CHECK(rel(o30, std::pow(rho, 3) * std::pow(lam, 6) * std::pow(3.0, -2.5)) < 1e-8);
    }
  }
}

TEST_CASE("exchange sign laws") {
  const auto& pf = cold_liquid();
  const TripletModel tri(pf);
  const auto he = builtin_species("helium");
  const StatePoint st{0.8, 0.8};
  const double lam = thermal_wavelength(he, st);

  const double b20 = omega_2_0(pf, lam, 0.8, Statistics::boson);
  CHECK(b20 > 0.0);
  CHECK(omega_2_0(pf, lam, 0.8, Statistics::fermion) == -b20);

  const double b21 = omega_2_1(pf, st, he, Statistics::boson);
  CHECK(b21 > 0.0);
  CHECK(omega_2_1(pf, st, he, Statistics::fermion) == -b21);

  const double o30 = omega_3_0(pf, tri, lam, 0.8);
  CHECK(o30 > 0.0);
  auto fermi = he;
  fermi.statistics = Statistics::fermion;
  CHECK(omega_3_0(pf, tri, thermal_wavelength(fermi, st), 0.8) == o30);
}

TEST_CASE("liquid symmetrization terms sit below the ideal-gas value") {
  const auto& pf = cold_liquid();
  const double lam = thermal_wavelength(builtin_species("helium"), {0.8, 0.8});
  const double ideal = 0.8 * 0.8 * std::pow(lam, 3) * std::pow(2.0, -2.5);
  const double o20 = omega_2_0(pf, lam, 0.8, Statistics::boson);
  CHECK(o20 < ideal / 2.0);
  CHECK(o20 > ideal / 20.0);
}

TEST_CASE("corrections vanish in the classical limit") {
  const auto& pf = golden();
  const TripletModel tri(pf);
  const double lam = 1e-3;
  CHECK(std::abs(omega_2_0(pf, lam, 0.5, Statistics::boson)) < 1e-12);
  CHECK(std::abs(omega_2_1(pf, lam, 1.0 / 1.5, 0.5, Statistics::boson)) < 1e-12);
  CHECK(std::abs(omega_3_0(pf, tri, lam, 0.5)) < 1e-12);

  // hbar^2 -> 0 through a very heavy particle.
  auto heavy = builtin_species("helium");
  heavy.mass_amu = 1e14;
  CHECK(std::abs(omega_1_2(pf, tri, {1.5, 0.5}, heavy, Omega12Form::pair_only)) < 1e-12);
  CHECK(std::abs(omega_1_2(pf, tri, {1.5, 0.5}, heavy, Omega12Form::with_triplet)) < 1e-12);
}

TEST_CASE("zero density gives zero") {
  const auto& pf = golden();
  const TripletModel tri(pf);
  CHECK(mean_laplacian_U(pf, 0.0) == 0.0);
  CHECK(mean_gradsq_U(pf, tri, 0.0).total() == 0.0);
  CHECK(omega_2_0(pf, 1.0, 0.0, Statistics::boson) == 0.0);
  CHECK(omega_2_1(pf, 1.0, 1.0, 0.0, Statistics::boson) == 0.0);
}

TEST_CASE("core region contributes nothing to the laplacian integrand") {
  const auto& pf = golden();
  const LennardJones lj;
  const double q = 0.5;
  CHECK(std::abs(q * q * pf.g_at(q) * (lj.d2u(q) + 2.0 * lj.du(q) / q)) < 1e-30);
}

TEST_CASE("golden non-commutativity corrections") {
  const auto& pf = golden();
  const TripletModel tri(pf);
  const auto he = builtin_species("helium");
  const StatePoint st{1.5, 0.5};
  const double a = omega_1_2(pf, tri, st, he, Omega12Form::with_triplet);
  const double b = omega_1_2(pf, tri, st, he, Omega12Form::pair_only);
  CHECK(std::abs(a + 0.741) < 0.015);
  CHECK(std::abs(b + 0.790) < 0.015);
  CHECK(rel(a, b) < 0.10);
}

TEST_CASE("the two forms agree within 10 percent up to rho = 0.5 on T* = 1.5") {
  const auto he = builtin_species("helium");
  for (double rho : {0.1, 0.3, 0.5}) {
    const StatePoint st{1.5, rho};
    const auto pf = solve_hnc(st, RadialGrid{}, {});
    const TripletModel tri(pf);
    const double a = omega_1_2(pf, tri, st, he, Omega12Form::with_triplet);
    const double b = omega_1_2(pf, tri, st, he, Omega12Form::pair_only);
    CHECK(rel(a, b) < 0.10);
  }
}

TEST_CASE("argon corrections scale with the squared wavelength") {
  const auto& pf = cold_liquid();
  const TripletModel tri(pf);
  const StatePoint st{0.8, 0.8};
  const auto he = builtin_species("helium"), ar = builtin_species("argon");
  const double ratio = std::pow(thermal_wavelength(he, st) / thermal_wavelength(ar, st), 2);
  const double b_he = omega_1_2(pf, tri, st, he, Omega12Form::pair_only);
  const double b_ar = omega_1_2(pf, tri, st, ar, Omega12Form::pair_only);
  CHECK(rel(b_he / b_ar, ratio) < 1e-12);
  CHECK(ratio > 150.0);
  CHECK(ratio < 250.0);
}

TEST_CASE("gradient-squared triplet term vanishes without forces") {
  // A grid g that is zero wherever the LJ force is non-negligible.
  auto pf = PairFunctions::ideal(RadialGrid{});
  for (std::size_t j = 0; j < pf.grid.size(); ++j)
    if (pf.grid.r(j) < 30.0) pf.g[j] = 0.0;
  pf.core_g = 0.0;
  const TripletModel tri(pf);
  CHECK(std::abs(mean_gradsq_U(pf, tri, 0.5).triplet) < 1e-12);
}

TEST_CASE("triplet model must wrap the same pair functions") {
  const auto& pf = golden();
  const auto other = PairFunctions::ideal(RadialGrid{});
  const TripletModel tri(other);
  CHECK_THROWS_AS(omega_3_0(pf, tri, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(mean_gradsq_U(pf, tri, 0.5), DomainError);
}

TEST_CASE("hard-core dimer") {
  const double rho = 0.7;
  for (double lam : {0.5, 1.0, 1.5}) {
    const double d = 3.0 * lam;
    const double exact = hard_core_dimer(d, lam, rho, Statistics::boson, HardCoreMode::exact_erfc);
    const double asym = hard_core_dimer(d, lam, rho, Statistics::boson, HardCoreMode::asymptotic);
    CHECK(rel(asym, exact) < 1e-3);
    CHECK(hard_core_dimer(d, lam, rho, Statistics::fermion, HardCoreMode::exact_erfc) == -exact);
  }

  // Direct quadrature of (4 pi rho^2 / 2) int_d^inf q^2 exp(-2 pi q^2/Lambda^2) dq.
  for (double d : {0.3, 0.9, 1.7}) {
    const double lam = 1.1;
    const auto rule = gauss_legendre(200, d, d + 12.0 * lam);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double q = rule.nodes[i];
      s += rule.weights[i] * q * q * std::exp(-2.0 * M_PI * q * q / (lam * lam));
    }
    s *= 2.0 * M_PI * rho * rho;
    CHECK(rel(hard_core_dimer(d, lam, rho, Statistics::boson, HardCoreMode::exact_erfc), s) < 1e-10);
  }

  // d = Lambda: suppression by exp(-2 pi) relative to rho^2 Lambda^3.
  const double lam = 1.0;
  const double v = hard_core_dimer(lam, lam, rho, Statistics::boson, HardCoreMode::exact_erfc);
  CHECK(v / (rho * rho * std::pow(lam, 3)) < 2e-3);
  CHECK_THROWS_AS(hard_core_dimer(0.0, 1.0, rho, Statistics::boson, HardCoreMode::exact_erfc), DomainError);
}

TEST_CASE("kinetic energy average") {
  const auto& pf = golden();
  const TripletModel tri(pf);
  const auto he = builtin_species("helium");
  const StatePoint st{1.5, 0.5};
  const double n = 500.0, volume = n / st.rho_reduced;
  const double hbar2 = hbar_squared_reduced(he);
  const double lap = mean_laplacian_U(pf, st.rho_reduced) * volume;
  const double k = kinetic_energy_average(n, st, hbar2, lap);
  const double b = omega_1_2(pf, tri, st, he, Omega12Form::pair_only);
  // Quantum excess per particle from the pair-only correction density.
  CHECK(rel(k / n - 1.5 * st.t_reduced, -st.t_reduced * b / st.rho_reduced) < 1e-12);
  CHECK(k / n > 1.5 * st.t_reduced);
  CHECK(kinetic_energy_average(n, st, 0.0, lap) == 1.5 * n * st.t_reduced);
}

TEST_CASE("o21 lies between o20 and o12 on a helium liquid state") {
  const auto& pf = cold_liquid();
  const TripletModel tri(pf);
  const auto he = builtin_species("helium");
  const StatePoint st{0.8, 0.8};
  const double lam = thermal_wavelength(he, st);
  const double o20 = omega_2_0(pf, lam, 0.8, Statistics::boson);
  const double o21 = omega_2_1(pf, st, he, Statistics::boson);
  const double o12 = omega_1_2(pf, tri, st, he, Omega12Form::pair_only);
  CHECK(std::abs(o20) < std::abs(o21));
  CHECK(std::abs(o21) < std::abs(o12));
}
