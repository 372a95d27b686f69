#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qcorr/errors.hpp"
#include "qcorr/oz_hnc.hpp"

using namespace qcorr;

namespace {

const RadialGrid& default_grid() {
  static const RadialGrid grid;
  return grid;
}

const PairFunctions& golden() {
  static const PairFunctions pf = solve_hnc({1.5, 0.5}, default_grid(), {});
  return pf;
}

}  // namespace

TEST_CASE("grid geometry") {
  const RadialGrid g(4096, 0.01);
  CHECK(g.r(0) == 0.01);
  CHECK(std::abs(g.dk() - M_PI / (4096 * 0.01)) < 1e-15);
  CHECK(g.r_max() >= 20.0);
  CHECK_THROWS(RadialGrid(1000, 0.01));
  CHECK_THROWS(RadialGrid(4096, 0.05));
}

TEST_CASE("gaussian transform pair") {
  // exp(-a r^2) <-> (pi/a)^{3/2} exp(-k^2 / 4a)
  const auto& grid = default_grid();
  const double a = 1.3;
  std::vector<double> f(grid.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-a * grid.r(j) * grid.r(j));
  FourierBessel fb(grid);
  const auto fk = fb.forward(f);
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < fk.size(); ++i) {
    const double k = grid.k(i);
    err = std::max(err, std::abs(fk[i] - std::pow(M_PI / a, 1.5) * std::exp(-k * k / (4.0 * a))));
  }
  CHECK(err < 1e-10);

  const auto back = fb.inverse(fk);
  double round = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j) round = std::max(round, std::abs(back[j] - f[j]));
  CHECK(round < 1e-12);
}

TEST_CASE("transform rejects mismatched sizes") {
  FourierBessel fb(default_grid());
  std::vector<double> small(10), out(default_grid().size());
  CHECK_THROWS_AS(fb.forward(small, out), ShapeError);
}

TEST_CASE("low-density limit is the Boltzmann factor") {
  const auto& grid = default_grid();
  const double t = 1.2;
  const auto pf = solve_hnc({t, 1e-6}, grid, {});
  const LennardJones lj;
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(pf.g[j] - std::exp(-lj.u(grid.r(j)) / t)));
  CHECK(err < 1e-4);
  // Second virial coefficient governs the pressure: beta p = rho + B2 rho^2.
  CHECK(std::abs(virial_pressure(pf, {t, 1e-6}) / 1e-6 - 1.0) < 1e-5);
}

TEST_CASE("golden state pressure and structure") {
  const auto& pf = golden();
  const double p = virial_pressure(pf, {1.5, 0.5});
  CHECK(std::abs(p - 0.391) < 0.010);
  CHECK(hnc_fixed_point_residual(pf, {1.5, 0.5}) < 1e-7);
  CHECK(pf.g[10] < 1e-20);  // r = 0.11, deep in the core

  double peak = 0.0, at = 0.0;
  for (std::size_t j = 0; j < pf.grid.size(); ++j)
    if (pf.g[j] > peak) peak = pf.g[j], at = pf.grid.r(j);
  CHECK(peak > 1.2);
  CHECK(at > 1.0);
  CHECK(at < 1.2);
  CHECK(std::abs(pf.g.back() - 1.0) < 1e-6);

  for (std::size_t j = 0; j < pf.grid.size(); ++j) {
    CHECK(std::abs(pf.h[j] - (pf.g[j] - 1.0)) < 1e-15);
    CHECK(std::abs(pf.gamma[j] - (pf.h[j] - pf.c[j])) < 1e-12);
  }
}

TEST_CASE("pressure is insensitive to the grid") {
  const auto finer = solve_hnc({1.5, 0.5}, RadialGrid(8192, 0.005), {});
  const auto longer = solve_hnc({1.5, 0.5}, RadialGrid(4096, 0.02), {});
  const double p0 = virial_pressure(golden(), {1.5, 0.5});
  CHECK(std::abs(virial_pressure(finer, {1.5, 0.5}) - p0) < 2e-3);
  CHECK(std::abs(virial_pressure(longer, {1.5, 0.5}) - p0) < 5e-3);
}

TEST_CASE("g lookup interpolates and extends") {
  const auto& pf = golden();
  CHECK(pf.g_at(0.001) == pf.core_g);
  CHECK(pf.g_at(1000.0) == 1.0);
  CHECK(pf.g_at(pf.grid.r(100)) == pf.g[100]);
  const double mid = 0.5 * (pf.grid.r(120) + pf.grid.r(121));
  CHECK(std::abs(g_lookup(pf, mid) - 0.5 * (pf.g[120] + pf.g[121])) < 1e-14);

  const auto ideal = PairFunctions::ideal(default_grid());
  CHECK(ideal.g_at(0.0) == 1.0);
  CHECK(ideal.g_at(3.3) == 1.0);
}

TEST_CASE("warm start reproduces the cold solution") {
  const auto& pf = golden();
  const auto again = solve_hnc({1.5, 0.5}, default_grid(), {}, &pf.gamma);
  CHECK(again.iterations <= 2);
  CHECK(std::abs(virial_pressure(again, {1.5, 0.5}) - virial_pressure(pf, {1.5, 0.5})) < 1e-8);

  const auto moved = solve_hnc_from(pf, {1.5, 0.5}, {1.4, 0.55}, {});
  const auto cold = solve_hnc({1.4, 0.55}, default_grid(), {});
  CHECK(std::abs(virial_pressure(moved, {1.4, 0.55}) - virial_pressure(cold, {1.4, 0.55})) < 1e-7);
}

TEST_CASE("pressure increases with density on a supercritical isotherm") {
  double last = 0.0;
  for (double rho : {0.1, 0.3, 0.5, 0.7}) {
    const double p = virial_pressure(solve_hnc({1.5, rho}, default_grid(), {}), {1.5, rho});
    CHECK(p > last);
    last = p;
  }
}

TEST_CASE("solver argument checks") {
  SolverOptions bad;
  bad.mixing = 0.0;
  CHECK_THROWS_AS(solve_hnc({1.5, 0.5}, default_grid(), bad), DomainError);
  std::vector<double> wrong(17, 0.0);
  CHECK_THROWS_AS(solve_hnc({1.5, 0.5}, default_grid(), {}, &wrong), ShapeError);
  CHECK_THROWS_AS(solve_hnc({0.0, 0.5}, default_grid(), {}), DomainError);
}

TEST_CASE("iteration cap surfaces as a convergence error") {
  SolverOptions opts;
  opts.max_iter = 3;
  CHECK_THROWS_AS(solve_hnc({1.5, 0.5}, default_grid(), opts), ConvergenceError);
}

TEST_CASE("dense cold liquid") {
  const StatePoint st{0.5, 0.85};
  const auto pf = solve_hnc(st, default_grid(), {});
  double peak = 0.0;
  for (double g : pf.g) peak = std::max(peak, g);
  CHECK(peak > 2.0);
  CHECK(hnc_fixed_point_residual(pf, st) < 1e-7);
}

TEST_CASE("pair function dump") {
  const auto pf = PairFunctions::ideal(RadialGrid(2048, 0.01));
  std::ostringstream os;
  write_pair_functions_csv(os, pf);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,g,h,c");
  std::getline(in, line);
  CHECK(line == "0.01,1,0,0");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2048);
}
