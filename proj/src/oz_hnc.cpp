#include "qcorr/oz_hnc.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kMinContinuationStep = 1e-3;
constexpr double kMinMixing = 1e-3;

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

RadialGrid::RadialGrid(std::size_t n_points, double dr) : n_(n_points), dr_(dr) {
  if (n_points < 2048 || !is_power_of_two(n_points))
    throw DomainError("radial grid needs a power-of-two point count >= 2048");
  if (!(dr > 0.0) || dr > 0.02) throw DomainError("radial grid spacing must lie in (0, 0.02] sigma");
  if (static_cast<double>(n_points) * dr < 20.0) throw DomainError("radial grid must reach at least 20 sigma");
}

double RadialGrid::dk() const { return constants::pi / (static_cast<double>(n_) * dr_); }

struct FourierBessel::Plan {
  std::vector<double> in, out;
  fftw_plan plan = nullptr;

  // The last node sits on a zero of every sine, so the transform has n - 1
  // active points and (n - 1) + 1 is a power of two.
  explicit Plan(std::size_t n) : in(n - 1), out(n - 1) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(n - 1), in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};

FourierBessel::FourierBessel(const RadialGrid& grid) : grid_(grid), plan_(std::make_unique<Plan>(grid.size())) {}
FourierBessel::~FourierBessel() = default;
FourierBessel::FourierBessel(FourierBessel&&) noexcept = default;
FourierBessel& FourierBessel::operator=(FourierBessel&&) noexcept = default;

void FourierBessel::forward(std::span<const double> f, std::span<double> out) {
  const std::size_t n = grid_.size();
  if (f.size() != n || out.size() != n) throw ShapeError("sample count does not match the radial grid");
  for (std::size_t j = 0; j + 1 < n; ++j) plan_->in[j] = grid_.r(j) * f[j];
  fftw_execute(plan_->plan);
  // RODFT00 returns 2 sum_j x_j sin(...).
  const double scale = 2.0 * constants::pi * grid_.dr();
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = scale * plan_->out[i] / grid_.k(i);
  out[n - 1] = 0.0;
}

void FourierBessel::inverse(std::span<const double> f, std::span<double> out) {
  const std::size_t n = grid_.size();
  if (f.size() != n || out.size() != n) throw ShapeError("sample count does not match the radial grid");
  for (std::size_t i = 0; i + 1 < n; ++i) plan_->in[i] = grid_.k(i) * f[i];
  fftw_execute(plan_->plan);
  const double scale = grid_.dk() / (4.0 * constants::pi * constants::pi);
  for (std::size_t j = 0; j + 1 < n; ++j) out[j] = scale * plan_->out[j] / grid_.r(j);
  out[n - 1] = 0.0;
}

std::vector<double> FourierBessel::forward(std::span<const double> f) {
  std::vector<double> out(grid_.size());
  forward(f, out);
  return out;
}

std::vector<double> FourierBessel::inverse(std::span<const double> f) {
  std::vector<double> out(grid_.size());
  inverse(f, out);
  return out;
}

double PairFunctions::g_at(double r) const {
  if (r < grid.r(0)) return core_g;
  if (r >= grid.r_max()) return 1.0;
  const double x = r / grid.dr() - 1.0;
  const auto j = static_cast<std::size_t>(x);
  const double t = x - static_cast<double>(j);
  if (t == 0.0) return g[j];
  return g[j] + t * (g[j + 1] - g[j]);
}

PairFunctions PairFunctions::ideal(const RadialGrid& grid) {
  PairFunctions pf{grid, {}, {}, {}, {}, 1.0, 0, 0.0};
  pf.g.assign(grid.size(), 1.0);
  pf.h.assign(grid.size(), 0.0);
  pf.c.assign(grid.size(), 0.0);
  pf.gamma.assign(grid.size(), 0.0);
  return pf;
}

namespace {

std::vector<double> beta_u_on_grid(const RadialGrid& grid, double beta) {
  const LennardJones lj;
  std::vector<double> bu(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) bu[j] = beta * lj.u(grid.r(j));
  return bu;
}

void hnc_closure(std::span<const double> beta_u, std::span<const double> gamma, std::span<double> c) {
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = std::exp(-beta_u[j] + gamma[j]) - 1.0 - gamma[j];
}

// gamma from c through the OZ relation; false if 1 - rho c^ <= 0 anywhere.
bool oz_gamma(FourierBessel& fb, double rho, std::span<const double> c, std::span<double> c_k,
              std::span<double> gamma_k, std::span<double> gamma) {
  fb.forward(c, c_k);
  for (std::size_t i = 0; i < c_k.size(); ++i) {
    const double denom = 1.0 - rho * c_k[i];
    if (!(denom > 0.0)) return false;
    gamma_k[i] = rho * c_k[i] * c_k[i] / denom;
  }
  fb.inverse(gamma_k, gamma);
  return true;
}

void solve_in_place(double rho, double beta, FourierBessel& fb, const SolverOptions& opts,
                    std::vector<double>& gamma, int& iterations, double& residual) {
  const RadialGrid& grid = fb.grid();
  const std::size_t n = grid.size();
  const auto bu = beta_u_on_grid(grid, beta);
  std::vector<double> c(n), c_k(n), gamma_k(n), gamma_new(n);

  double mixing = opts.mixing;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iter; ++it) {
    hnc_closure(bu, gamma, c);
    if (!oz_gamma(fb, rho, c, c_k, gamma_k, gamma_new))
      throw StabilityError("1 - rho c(k) <= 0 at rho* = " + std::to_string(rho) +
                           ", T* = " + std::to_string(1.0 / beta));
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(gamma_new[j] - gamma[j]));
    if (!std::isfinite(diff)) throw StabilityError("HNC iteration produced non-finite values");
    iterations = it;
    residual = diff;
    if (diff < opts.tol) {
      gamma.swap(gamma_new);
      return;
    }
    // Halve on growth, recover slowly while the residual shrinks.
    if (diff > last) {
      mixing = std::max(0.5 * mixing, kMinMixing);
    } else {
      mixing = std::min(1.05 * mixing, opts.mixing);
    }
    last = diff;
    for (std::size_t j = 0; j < n; ++j) gamma[j] += mixing * (gamma_new[j] - gamma[j]);
  }
  throw ConvergenceError("HNC did not converge at rho* = " + std::to_string(rho) + ", T* = " +
                             std::to_string(1.0 / beta) + " (residual " + std::to_string(residual) + ")",
                         residual, iterations);
}

}  // namespace

namespace {

// Continuation in one state variable from the last solved point: on failure
// the step is halved and retried from the last converged gamma.
class Continuation {
 public:
  Continuation(const RadialGrid& grid, const SolverOptions& opts, std::vector<double> gamma, StatePoint solved)
      : fb_(grid), opts_(opts), gamma_(std::move(gamma)), solved_(solved) {}

  void advance(StatePoint target) {
    const bool in_density = target.t_reduced == solved_.t_reduced;
    const double from = in_density ? solved_.rho_reduced : solved_.t_reduced;
    const double to = in_density ? target.rho_reduced : target.t_reduced;
    double step = to - from;
    double at = from;
    while (at != to) {
      const double next = std::abs(step) >= std::abs(to - at) ? to : at + step;
      const StatePoint trial_state = in_density ? StatePoint{target.t_reduced, next} : StatePoint{next, target.rho_reduced};
      std::vector<double> trial = gamma_;
      try {
        solve_in_place(trial_state.rho_reduced, trial_state.beta(), fb_, opts_, trial, iterations_, residual_);
      } catch (const std::runtime_error&) {
        step *= 0.5;
        if (std::abs(step) < kMinContinuationStep) throw;
        continue;
      }
      gamma_.swap(trial);
      at = next;
      solved_ = trial_state;
    }
  }

  void solve_here(StatePoint state) {
    solved_ = state;
    solve_in_place(state.rho_reduced, state.beta(), fb_, opts_, gamma_, iterations_, residual_);
  }

  StatePoint& solved() { return solved_; }

  PairFunctions result(const StatePoint& state) const {
    const RadialGrid& grid = fb_.grid();
    const std::size_t n = grid.size();
    PairFunctions pf{grid, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), gamma_,
                     0.0, iterations_, residual_};
    const auto bu = beta_u_on_grid(grid, state.beta());
    // g straight from the closure: forming gamma + c + 1 leaves roundoff in
    // the core that u'(r)^2 ~ r^-26 amplifies.
    for (std::size_t j = 0; j < n; ++j) {
      pf.g[j] = std::exp(-bu[j] + pf.gamma[j]);
      pf.h[j] = pf.g[j] - 1.0;
      pf.c[j] = pf.h[j] - pf.gamma[j];
    }
    return pf;
  }

 private:
  FourierBessel fb_;
  const SolverOptions& opts_;
  std::vector<double> gamma_;
  StatePoint solved_;
  int iterations_ = 0;
  double residual_ = 0.0;
};

void check_options(const SolverOptions& opts) {
  if (!(opts.mixing > 0.0 && opts.mixing <= 1.0)) throw DomainError("mixing must lie in (0, 1]");
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
}

}  // namespace

PairFunctions solve_hnc(const StatePoint& state, const RadialGrid& grid, const SolverOptions& opts,
                        const std::vector<double>* initial_gamma) {
  state.validate();
  check_options(opts);
  const std::size_t n = grid.size();

  if (initial_gamma) {
    if (initial_gamma->size() != n) throw ShapeError("initial gamma does not match the radial grid");
    Continuation path(grid, opts, *initial_gamma, state);
    path.solve_here(state);
    return path.result(state);
  }

  // gamma = 0 is the exact zero-density solution at any temperature.
  Continuation path(grid, opts, std::vector<double>(n, 0.0), StatePoint{state.t_reduced, 0.0});
  if (!opts.rho_ramp.empty()) {
    for (double rho : opts.rho_ramp)
      if (rho > path.solved().rho_reduced && rho < state.rho_reduced) path.advance({state.t_reduced, rho});
    path.advance(state);
  } else if (state.t_reduced < opts.cooling_start && state.rho_reduced > opts.cooling_density) {
    // Dense subcritical state: compress along a supercritical isotherm, cool
    // at a density safely inside the liquid, then expand down the liquid
    // branch. The path never crosses the two-phase region.
    const double anchor = std::max(state.rho_reduced, opts.liquid_anchor);
    path.solved().t_reduced = opts.cooling_start;
    path.advance({opts.cooling_start, anchor});
    path.advance({state.t_reduced, anchor});
    path.advance(state);
  } else if (state.rho_reduced > 0.0) {
    path.advance(state);
  }
  return path.result(state);
}

PairFunctions solve_hnc_from(const PairFunctions& start, const StatePoint& start_state, const StatePoint& target,
                             const SolverOptions& opts) {
  target.validate();
  check_options(opts);
  if (start.gamma.size() != start.grid.size()) throw ShapeError("start solution does not match its grid");
  Continuation path(start.grid, opts, start.gamma, start_state);
  if (target.t_reduced != start_state.t_reduced) path.advance({target.t_reduced, start_state.rho_reduced});
  path.advance(target);
  return path.result(target);
}

double hnc_fixed_point_residual(const PairFunctions& pf, const StatePoint& state) {
  const std::size_t n = pf.grid.size();
  FourierBessel fb(pf.grid);
  const auto bu = beta_u_on_grid(pf.grid, state.beta());
  std::vector<double> c(n), c_k(n), gamma_k(n), gamma_new(n);
  hnc_closure(bu, pf.gamma, c);
  if (!oz_gamma(fb, state.rho_reduced, c, c_k, gamma_k, gamma_new))
    return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    diff = std::max(diff, std::abs(gamma_new[j] - pf.gamma[j]));
    diff = std::max(diff, std::abs(c[j] - pf.c[j]));
  }
  return diff;
}

double virial_pressure(const PairFunctions& pf, const StatePoint& state) {
  const LennardJones lj;
  const double rho = state.rho_reduced;
  const double integral = radial_trapezoid(pf.grid, [&](std::size_t j, double r) {
    if (pf.g[j] == 0.0) return 0.0;
    return r * r * r * lj.du(r) * pf.g[j];
  });
  return rho - 2.0 * constants::pi * state.beta() * rho * rho / 3.0 * integral;
}

void write_pair_functions_csv(std::ostream& os, const PairFunctions& pf) {
  os << "r,g,h,c\n";
  char buf[128];
  for (std::size_t j = 0; j < pf.grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", pf.grid.r(j), pf.g[j], pf.h[j], pf.c[j]);
    os << buf;
  }
}

}  // namespace qcorr
