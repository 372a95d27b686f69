#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qcorr/potential.hpp"
#include "qcorr/units.hpp"

namespace qcorr {

// Uniform radial grid r_j = (j+1) dr, j = 0..n-1, with the conjugate grid
// k_j = (j+1) dk, dk = pi / (n dr). The last node sits on a zero of every
// sine, so the discrete sine transform below has n - 1 active points and is
// exactly invertible on them.
class RadialGrid {
 public:
  static constexpr std::size_t kDefaultPoints = 4096;
  static constexpr double kDefaultSpacing = 0.01;

  RadialGrid(std::size_t n_points = kDefaultPoints, double dr = kDefaultSpacing);

  std::size_t size() const { return n_; }
  double dr() const { return dr_; }
  double dk() const;
  double r(std::size_t j) const { return static_cast<double>(j + 1) * dr_; }
  double k(std::size_t j) const { return static_cast<double>(j + 1) * dk(); }
  double r_max() const { return r(n_ - 1); }

  bool operator==(const RadialGrid&) const = default;

 private:
  std::size_t n_;
  double dr_;
};

// 3-D Fourier transform of radially symmetric functions via a type-I sine
// transform:
//   forward  F(k) = (4 pi / k) int r f(r) sin(k r) dr
//   inverse  f(r) = 1 / (2 pi^2 r) int k F(k) sin(k r) dk
class FourierBessel {
 public:
  explicit FourierBessel(const RadialGrid& grid);
  ~FourierBessel();
  FourierBessel(const FourierBessel&) = delete;
  FourierBessel& operator=(const FourierBessel&) = delete;
  FourierBessel(FourierBessel&&) noexcept;
  FourierBessel& operator=(FourierBessel&&) noexcept;

  const RadialGrid& grid() const { return grid_; }

  // Throw ShapeError when sizes differ from the grid.
  void forward(std::span<const double> f, std::span<double> out);
  void inverse(std::span<const double> f, std::span<double> out);
  std::vector<double> forward(std::span<const double> f);
  std::vector<double> inverse(std::span<const double> f);

 private:
  struct Plan;
  RadialGrid grid_;
  std::unique_ptr<Plan> plan_;
};

inline std::vector<double> fourier_bessel_forward(std::span<const double> f, const RadialGrid& grid) {
  return FourierBessel(grid).forward(f);
}
inline std::vector<double> fourier_bessel_inverse(std::span<const double> f, const RadialGrid& grid) {
  return FourierBessel(grid).inverse(f);
}

// g, h = g - 1, c and gamma = h - c on a RadialGrid.
struct PairFunctions {
  RadialGrid grid;
  std::vector<double> g, h, c, gamma;
  // g between r = 0 and the first node. Zero for a solved LJ fluid; one for
  // the ideal-gas override.
  double core_g = 0.0;
  int iterations = 0;
  double residual = 0.0;

  // Linear interpolation on the grid; core_g below r_0 and 1 beyond r_max.
  double g_at(double r) const;

  // g == 1 everywhere, h = c = gamma = 0.
  static PairFunctions ideal(const RadialGrid& grid);
};

inline double g_lookup(const PairFunctions& pf, double r) { return pf.g_at(r); }

struct SolverOptions {
  double mixing = 0.2;
  double tol = 1e-8;
  int max_iter = 20000;
  // Densities solved in order before the target, each warm-starting the next.
  std::vector<double> rho_ramp;
  // Without an explicit ramp, states denser than cooling_density below
  // cooling_start are reached by compressing at cooling_start to at least
  // liquid_anchor, cooling at fixed density and finally expanding along the
  // target isotherm. Other states are approached in density from zero.
  double cooling_start = 1.5;
  double cooling_density = 0.3;
  double liquid_anchor = 0.9;
};

// HNC closure c = exp(-beta u + gamma) - 1 - gamma with the OZ relation
// gamma^ = rho c^2 / (1 - rho c^), Picard iteration with step halving whenever
// the sup-norm change in gamma grows. Untruncated LJ (eps = sigma = 1).
// The state is reached by continuation from rho = 0 (see SolverOptions), or
// directly from initial_gamma when given.
// Throws ConvergenceError or StabilityError when the continuation step
// underflows, which in practice marks a spinodal.
PairFunctions solve_hnc(const StatePoint& state, const RadialGrid& grid, const SolverOptions& opts,
                        const std::vector<double>* initial_gamma = nullptr);

// Continuation from a solved state: temperature first, then density, with
// the same step halving as solve_hnc. Used to follow a branch point by point.
PairFunctions solve_hnc_from(const PairFunctions& start, const StatePoint& start_state, const StatePoint& target,
                             const SolverOptions& opts);

// Largest change in gamma after one more OZ + HNC pass from pf, i.e. how far
// pf is from a fixed point.
double hnc_fixed_point_residual(const PairFunctions& pf, const StatePoint& state);

// beta p sigma^3 = rho - (2 pi beta rho^2 / 3) int q^3 u'(q) g(q) dq.
double virial_pressure(const PairFunctions& pf, const StatePoint& state);

// r, g, h, c with 17 significant digits.
void write_pair_functions_csv(std::ostream& os, const PairFunctions& pf);

// Trapezoid rule from the origin over the grid nodes for a radial integrand
// that vanishes at r = 0: dr * (sum_{j<n-1} f(r_j) + f(r_{n-1}) / 2).
template <class F>
double radial_trapezoid(const RadialGrid& grid, F&& integrand) {
  const std::size_t n = grid.size();
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) sum += integrand(j, grid.r(j));
  sum += 0.5 * integrand(n - 1, grid.r(n - 1));
  return sum * grid.dr();
}

}  // namespace qcorr
