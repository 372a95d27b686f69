#include "qcorr/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kOverlapDistance = 0.3;
constexpr double kMinLatticeSpacing = 0.8;
constexpr double kTargetAcceptance = 0.5;
constexpr int kTuneInterval = 10;

// Reduced LJ pieces from r^2: u, u'/r and u'' (eps = sigma = 1).
struct PairTerms {
  double u, du_over_r, d2u;
};

inline PairTerms lj_terms(double r2) {
  const double inv2 = 1.0 / r2;
  const double s6 = inv2 * inv2 * inv2;
  const double s12 = s6 * s6;
  return {4.0 * (s12 - s6), (-48.0 * s12 + 24.0 * s6) * inv2, (624.0 * s12 - 168.0 * s6) * inv2};
}

inline double lj_energy(double r2) {
  const double inv2 = 1.0 / r2;
  const double s6 = inv2 * inv2 * inv2;
  return 4.0 * (s6 * s6 - s6);
}

inline double wrap(double x, double box) {
  x -= box * std::floor(x / box);
  return x >= box ? x - box : x;
}

inline Vec3 min_image(const Vec3& a, const Vec3& b, double box, double inv_box) {
  Vec3 d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  for (double& x : d) x -= box * std::nearbyint(x * inv_box);
  return d;
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Pairs inside the cutoff with everything the observables and w2 need.
struct PairEntry {
  std::uint32_t j, k;
  Vec3 d;  // x_j - x_k, minimum image
  double r2;
  PairTerms t;
};

std::vector<PairEntry> pair_table(const Configuration& config, double r_cut) {
  const std::size_t n = config.size();
  const double box = config.box_length, inv_box = 1.0 / box;
  const double rc2 = r_cut * r_cut;
  std::vector<PairEntry> pairs;
  pairs.reserve(n * 64);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const Vec3 d = min_image(config.positions[j], config.positions[k], box, inv_box);
      const double r2 = dot(d, d);
      if (r2 >= rc2) continue;
      if (r2 < kOverlapDistance * kOverlapDistance)
        throw StabilityError("particles " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
      pairs.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k), d, r2, lj_terms(r2)});
    }
  }
  return pairs;
}

// Pair search radius: the cutoff, or half the box for the untruncated
// potential. A cutoff past half the box would miss periodic images.
double pair_range(const Configuration& config, const LennardJones& potential) {
  const double half = 0.5 * config.box_length;
  if (!potential.truncated()) return half;
  if (potential.r_cut() > half)
    throw GeometryError("cutoff " + std::to_string(potential.r_cut()) + " exceeds half the box (" +
                        std::to_string(half) + ")");
  return potential.r_cut();
}

// -(Lap U)_tail for the whole box, from the laplacian_tail density with unit
// prefactor.
double config_laplacian_tail(const Configuration& config, const LennardJones& potential) {
  if (!potential.truncated()) return 0.0;
  return -laplacian_tail(config.density(), potential.r_cut(), 1.0) * config.volume();
}

ConfigObservables observables_from_pairs(const Configuration& config, const LennardJones& potential,
                                         const std::vector<PairEntry>& pairs) {
  ConfigObservables out;
  out.forces.assign(config.size(), Vec3{0.0, 0.0, 0.0});
  double lap = 0.0;
  for (const auto& p : pairs) {
    out.potential_energy += p.t.u;
    out.virial += p.t.du_over_r * p.r2;
    lap += p.t.d2u + 2.0 * p.t.du_over_r;
    // F_j = -u'(r) d/r
    for (int a = 0; a < 3; ++a) {
      const double f = -p.t.du_over_r * p.d[a];
      out.forces[p.j][a] += f;
      out.forces[p.k][a] -= f;
    }
  }
  out.laplacian_tail = config_laplacian_tail(config, potential);
  out.laplacian = 2.0 * lap + out.laplacian_tail;
  for (const auto& f : out.forces) out.gradsq += dot(f, f);
  return out;
}

WTerms w_terms_from_pairs(const std::vector<PairEntry>& pairs, const ConfigObservables& obs,
                          const std::vector<Vec3>& momenta, double beta) {
  double p_dot_f = 0.0;
  for (std::size_t j = 0; j < momenta.size(); ++j) p_dot_f += dot(momenta[j], obs.forces[j]);
  double pp_hess = 0.0;
  for (const auto& p : pairs) {
    const Vec3& pj = momenta[p.j];
    const Vec3& pk = momenta[p.k];
    const Vec3 dp{pj[0] - pk[0], pj[1] - pk[1], pj[2] - pk[2]};
    const double along2 = dot(dp, p.d) * dot(dp, p.d) / p.r2;
    pp_hess += p.t.d2u * along2 + p.t.du_over_r * (dot(dp, dp) - along2);
  }
  const double b2 = beta * beta, b3 = b2 * beta;
  WTerms w;
  // grad_j U = -F_j. Pair sums only: the estimators add the long-range part
  // as a separate constant.
  w.w1_imag = 0.5 * b2 * p_dot_f;
  w.w2 = b3 / 6.0 * pp_hess + b3 / 6.0 * obs.gradsq - b2 / 4.0 * (obs.laplacian - obs.laplacian_tail);
  return w;
}

// Coordinates as separate arrays so the trial-move loop vectorizes.
struct SoA {
  std::vector<double> x, y, z;

  explicit SoA(const Configuration& c) : x(c.size()), y(c.size()), z(c.size()) {
    for (std::size_t i = 0; i < c.size(); ++i) set(i, c.positions[i]);
  }
  void set(std::size_t i, const Vec3& v) {
    x[i] = v[0];
    y[i] = v[1];
    z[i] = v[2];
  }
};

// Energy change of moving particle i from old to trial, summed over k in
// [begin, end). Coordinates lie in [0, L), so one conditional shift gives the
// minimum image.
inline double move_delta(const SoA& s, std::size_t begin, std::size_t end, const Vec3& old, const Vec3& trial,
                         double box, double rc2) {
  const double* __restrict x = s.x.data();
  const double* __restrict y = s.y.data();
  const double* __restrict z = s.z.data();
  const double tx = trial[0], ty = trial[1], tz = trial[2];
  const double ox = old[0], oy = old[1], oz = old[2];
  const double half = 0.5 * box;
  double du = 0.0;
#pragma omp simd reduction(+ : du)
  for (std::size_t k = begin; k < end; ++k) {
    double ax = tx - x[k], ay = ty - y[k], az = tz - z[k];
    double bx = ox - x[k], by = oy - y[k], bz = oz - z[k];
    ax += (ax < -half ? box : 0.0) - (ax > half ? box : 0.0);
    ay += (ay < -half ? box : 0.0) - (ay > half ? box : 0.0);
    az += (az < -half ? box : 0.0) - (az > half ? box : 0.0);
    bx += (bx < -half ? box : 0.0) - (bx > half ? box : 0.0);
    by += (by < -half ? box : 0.0) - (by > half ? box : 0.0);
    bz += (bz < -half ? box : 0.0) - (bz > half ? box : 0.0);
    const double ra = ax * ax + ay * ay + az * az;
    const double rb = bx * bx + by * by + bz * bz;
    const double ia = 1.0 / ra, ib = 1.0 / rb;
    const double sa = ia * ia * ia, sb = ib * ib * ib;
    const double ea = 4.0 * (sa * sa - sa), eb = 4.0 * (sb * sb - sb);
    du += (ra < rc2 ? ea : 0.0) - (rb < rc2 ? eb : 0.0);
  }
  return du;
}

double total_energy(const Configuration& config, double rc2) {
  const double box = config.box_length, inv_box = 1.0 / box;
  double e = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j)
    for (std::size_t k = j + 1; k < config.size(); ++k) {
      const Vec3 d = min_image(config.positions[j], config.positions[k], box, inv_box);
      const double r2 = dot(d, d);
      if (r2 < rc2) e += lj_energy(r2);
    }
  return e;
}

McEstimate block_estimate(const std::vector<double>& block_means, std::size_t n_samples) {
  McEstimate est;
  const auto nb = static_cast<double>(block_means.size());
  for (double v : block_means) est.mean += v;
  est.mean /= nb;
  double var = 0.0;
  for (double v : block_means) var += (v - est.mean) * (v - est.mean);
  var /= nb - 1.0;
  est.std_err = std::sqrt(var / nb);
  est.n_samples = n_samples;
  return est;
}

// Per-sample integrands of forms a and b. gradU.gradU gets no tail: beyond the
// cutoff u'^2 falls off as q^-14. The truncated pair sums obey
// beta gradU.gradU = Lap U_pairs + Lap U_tail, because cutting u' off at r_cut
// leaves a surface term equal to the Laplacian tail, so a and b agree.
double form_a_sample(const McSample& s, const FormInputs& in) {
  const double b2 = in.beta * in.beta;
  return in.hbar2 * (-b2 / 12.0 * s.laplacian + b2 * in.beta / 24.0 * s.gradsq) / in.volume;
}

double form_b_sample(const McSample& s, const FormInputs& in) {
  return -in.hbar2 * in.beta * in.beta / 24.0 * s.laplacian / in.volume;
}

}  // namespace

void McParams::validate() const {
  if (n_particles < 2) throw DomainError("need at least two particles");
  if (n_blocks < 2) throw DomainError("need at least two blocks");
  if (configs_per_block < 1) throw DomainError("configs_per_block must be positive");
  if (steps_per_atom_between_samples < 1) throw DomainError("steps between samples must be positive");
  if (equilibration_sweeps < 0) throw DomainError("equilibration sweeps must be non-negative");
  if (!(max_displacement > 0.0)) throw DomainError("max displacement must be positive");
  if (!(r_cut > 0.0)) throw DomainError("cutoff must be positive");
  if (momentum_samples_per_config < 0) throw DomainError("momentum samples must be non-negative");
}

Configuration fcc_lattice(int n, double rho) {
  if (n < 1) throw DomainError("particle count must be positive");
  if (!(rho > 0.0)) throw DomainError("density must be positive");
  int cells = 1;
  while (4 * cells * cells * cells < n) ++cells;
  Configuration config;
  config.box_length = std::cbrt(static_cast<double>(n) / rho);
  const double a = config.box_length / cells;
  if (a / std::sqrt(2.0) < kMinLatticeSpacing)
    throw InitializationError("density " + std::to_string(rho) + " too high for a lattice start with N = " +
                              std::to_string(n));
  static constexpr double basis[4][3] = {{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
  config.positions.reserve(static_cast<std::size_t>(n));
  for (int ix = 0; ix < cells; ++ix)
    for (int iy = 0; iy < cells; ++iy)
      for (int iz = 0; iz < cells; ++iz)
        for (const auto& s : basis) {
          if (static_cast<int>(config.positions.size()) == n) return config;
          config.positions.push_back({(ix + s[0] + 0.25) * a, (iy + s[1] + 0.25) * a, (iz + s[2] + 0.25) * a});
        }
  return config;
}

ConfigObservables observables(const Configuration& config, const LennardJones& potential) {
  return observables_from_pairs(config, potential, pair_table(config, pair_range(config, potential)));
}

std::vector<Vec3> sample_momenta(Rng& rng, std::size_t n_particles, const StatePoint& state) {
  std::normal_distribution<double> normal(0.0, std::sqrt(state.t_reduced));
  std::vector<Vec3> p(n_particles);
  for (auto& v : p)
    for (double& x : v) x = normal(rng);
  return p;
}

WTerms w1_w2(const Configuration& config, const LennardJones& potential, const std::vector<Vec3>& momenta,
             double beta) {
  if (momenta.size() != config.size()) throw ShapeError("one momentum vector per particle expected");
  const auto pairs = pair_table(config, pair_range(config, potential));
  return w_terms_from_pairs(pairs, observables_from_pairs(config, potential, pairs), momenta, beta);
}

EstimatorForms estimator_forms(const std::vector<McSample>& samples, int n_blocks, const FormInputs& in) {
  if (n_blocks < 2) throw DomainError("estimators need at least two blocks");
  const std::size_t n = samples.size();
  const auto nb = static_cast<std::size_t>(n_blocks);
  if (n < nb || n % nb != 0) throw ShapeError("sample count must be a positive multiple of the block count");
  const std::size_t bs = n / nb;
  const double h2 = in.hbar2, h = std::sqrt(h2), b2 = in.beta * in.beta, b3 = b2 * in.beta, vol = in.volume;
  using C = std::complex<double>;

  // Cumulant sum D over the momentum draws of samples [s0, s1).
  const auto cumulant = [&](std::size_t s0, std::size_t s1) {
    C m1{0.0, 0.0};
    double count = 0.0;
    for (std::size_t i = s0; i < s1; ++i)
      for (const auto& w : samples[i].w) {
        m1 += C(h2 * w.w2, h * w.w1_imag);
        count += 1.0;
      }
    m1 /= count;
    C m2{0.0, 0.0}, m3{0.0, 0.0}, m4{0.0, 0.0};
    for (std::size_t i = s0; i < s1; ++i)
      for (const auto& w : samples[i].w) {
        const C d = C(h2 * w.w2, h * w.w1_imag) - m1;
        const C d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
      }
    m2 /= count;
    m3 /= count;
    m4 /= count;
    return m1 + 0.5 * m2 + m3 / 6.0 + m4 / 24.0 - m2 * m2 / 8.0;
  };

  // Every form is estimated within each block and the block values are
  // averaged. For the nonlinear c and d this makes the result depend on the
  // block length, which is part of their defect.
  std::vector<double> va(nb, 0.0), vb(nb, 0.0), vc(nb, 0.0), vci(nb, 0.0), vd(nb, 0.0);
  const bool have_w = !samples.front().w.empty();
  bool d_overflow = false;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t s0 = b * bs, s1 = s0 + bs;
    double exp_sum = 0.0, tail_c = 0.0;
    for (std::size_t i = s0; i < s1; ++i) {
      const McSample& s = samples[i];
      va[b] += form_a_sample(s, in);
      vb[b] += form_b_sample(s, in);
      tail_c += -h2 * b2 / 12.0 * s.laplacian_tail;
      exp_sum += std::exp(h2 * (b3 / 24.0 * s.gradsq - b2 / 12.0 * s.laplacian));
    }
    const auto k = static_cast<double>(bs);
    va[b] /= k;
    vb[b] /= k;
    const double exp_mean = exp_sum / k;
    if (exp_mean > 0.0 && std::isfinite(exp_mean)) {
      vd[b] = std::log(exp_mean) / vol;
    } else {
      d_overflow = true;
    }
    if (have_w) {
      // The sampled w comes from the truncated pair sums; its long-range part
      // is the Laplacian tail with the form a coefficient.
      const C dsum = cumulant(s0, s1);
      vc[b] = (dsum.real() + tail_c / k) / vol;
      vci[b] = dsum.imag() / vol;
    }
  }

  EstimatorForms out;
  out.a = block_estimate(va, n);
  out.b = block_estimate(vb, n);
  if (have_w) {
    out.c = block_estimate(vc, n);
    out.c_imag = block_estimate(vci, n);
  }
  if (d_overflow) {
    out.d.n_samples = n;
    out.d.overflow = true;
    out.d.mean = std::numeric_limits<double>::quiet_NaN();
    out.d.std_err = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.d = block_estimate(vd, n);
  }
  return out;
}

McResult run_nvt(const McParams& params, const SpeciesParams& species, const StatePoint& state) {
  params.validate();
  species.validate();
  state.validate();

  Configuration config = fcc_lattice(params.n_particles, state.rho_reduced);
  const double box = config.box_length;
  if (params.r_cut > 0.5 * box)
    throw GeometryError("cutoff " + std::to_string(params.r_cut) + " exceeds half the box " + std::to_string(0.5 * box));

  const LennardJones lj(1.0, 1.0, params.r_cut);
  const double rc2 = params.r_cut * params.r_cut;
  const double beta = state.beta();
  const double rho = config.density();
  const double vol = config.volume();
  const std::size_t n = config.size();

  Rng rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  double energy = total_energy(config, rc2);
  SoA soa(config);
  double delta = std::min(params.max_displacement, 0.5 * box);
  long long tried = 0, accepted = 0;

  const auto sweep = [&](int sweeps) {
    for (long long s = 0; s < static_cast<long long>(sweeps) * static_cast<long long>(n); ++s) {
      const std::size_t i = pick(rng);
      const Vec3 old = config.positions[i];
      Vec3 trial;
      for (int a = 0; a < 3; ++a) trial[a] = wrap(old[a] + delta * (2.0 * unit(rng) - 1.0), box);
      const double du =
          move_delta(soa, 0, i, old, trial, box, rc2) + move_delta(soa, i + 1, n, old, trial, box, rc2);
      ++tried;
      if (du <= 0.0 || unit(rng) < std::exp(-beta * du)) {
        config.positions[i] = trial;
        soa.set(i, trial);
        energy += du;
        ++accepted;
      }
    }
  };

  for (int done = 0; done < params.equilibration_sweeps; done += kTuneInterval) {
    tried = accepted = 0;
    sweep(std::min(kTuneInterval, params.equilibration_sweeps - done));
    const double acc = static_cast<double>(accepted) / static_cast<double>(tried);
    delta *= std::clamp(acc / kTargetAcceptance, 0.5, 1.5);
    delta = std::clamp(delta, 1e-3, 0.5 * box);
  }

  McResult result;
  result.box_length = box;
  result.max_displacement = delta;

  const double hbar2 = hbar_squared_reduced(species);
  const double e_tail = lj.energy_tail_per_particle(rho);
  const double p_tail = lj.pressure_tail(rho);

  const bool rdf_on = params.rdf_bin_width > 0.0;
  const double rdf_max = 0.5 * box;
  const std::size_t n_bins = rdf_on ? static_cast<std::size_t>(rdf_max / params.rdf_bin_width) : 0;
  std::vector<double> hist(n_bins, 0.0);

  std::vector<McSample> samples;
  samples.reserve(static_cast<std::size_t>(params.n_blocks) * static_cast<std::size_t>(params.configs_per_block));
  std::vector<double> blk_p, blk_e, blk_lap, blk_grad;

  tried = accepted = 0;
  for (int b = 0; b < params.n_blocks; ++b) {
    double sp = 0.0, se = 0.0, sl = 0.0, sg = 0.0;
    for (int c = 0; c < params.configs_per_block; ++c) {
      sweep(params.steps_per_atom_between_samples);
      const auto pairs = pair_table(config, params.r_cut);
      const auto obs = observables_from_pairs(config, lj, pairs);
      McSample s{obs.potential_energy, obs.virial, obs.laplacian, obs.laplacian_tail, obs.gradsq, {}};
      for (int m = 0; m < params.momentum_samples_per_config; ++m)
        s.w.push_back(w_terms_from_pairs(pairs, obs, sample_momenta(rng, n, state), beta));
      if (rdf_on) {
        for (const auto& p : pairs) {
          const double r = std::sqrt(p.r2);
          if (r < rdf_max) {
            const auto bin = static_cast<std::size_t>(r / params.rdf_bin_width);
            if (bin < n_bins) hist[bin] += 1.0;
          }
        }
        // Pairs beyond the cutoff still count towards g(r).
        if (rdf_max > params.r_cut) {
          const double inv_box = 1.0 / box;
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
              const Vec3 d = min_image(config.positions[j], config.positions[k], box, inv_box);
              const double r2 = dot(d, d);
              if (r2 < rc2 || r2 >= rdf_max * rdf_max) continue;
              const auto bin = static_cast<std::size_t>(std::sqrt(r2) / params.rdf_bin_width);
              if (bin < n_bins) hist[bin] += 1.0;
            }
        }
      }
      sp += rho - beta * s.virial / (3.0 * vol) + beta * p_tail;
      se += s.energy / static_cast<double>(n) + e_tail;
      sl += s.laplacian / vol;
      sg += beta * s.gradsq / vol;
      samples.push_back(std::move(s));
    }
    const double k = params.configs_per_block;
    blk_p.push_back(sp / k);
    blk_e.push_back(se / k);
    blk_lap.push_back(sl / k);
    blk_grad.push_back(sg / k);

    // Refresh the running tally and record how far it drifted.
    const double exact = total_energy(config, rc2);
    const double drift = std::abs(exact - energy) / std::max(std::abs(exact), 1.0);
    result.max_energy_drift = std::max(result.max_energy_drift, drift);
    energy = exact;
  }
  result.acceptance = static_cast<double>(accepted) / static_cast<double>(tried);

  const std::size_t ns = samples.size();
  result.pressure = block_estimate(blk_p, ns);
  result.energy_per_particle = block_estimate(blk_e, ns);
  result.laplacian_density = block_estimate(blk_lap, ns);
  result.beta_gradsq_density = block_estimate(blk_grad, ns);
  result.forms = estimator_forms(samples, params.n_blocks, FormInputs{hbar2, beta, vol});

  if (rdf_on) {
    const double norm_pairs = 0.5 * static_cast<double>(n) * rho * static_cast<double>(ns);
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double r0 = i * params.rdf_bin_width, r1 = r0 + params.rdf_bin_width;
      const double shell = 4.0 / 3.0 * constants::pi * (r1 * r1 * r1 - r0 * r0 * r0);
      result.rdf_r.push_back(0.5 * (r0 + r1));
      result.rdf_g.push_back(hist[i] / (norm_pairs * shell));
    }
  }

  // Per-block raw values for external re-analysis.
  const FormInputs in{hbar2, beta, vol};
  const std::size_t bs = static_cast<std::size_t>(params.configs_per_block);
  for (int b = 0; b < params.n_blocks; ++b) {
    double a = 0.0, bb = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
      a += form_a_sample(samples[i], in);
      bb += form_b_sample(samples[i], in);
    }
    result.blocks.push_back({b, "pressure", blk_p[b]});
    result.blocks.push_back({b, "energy_per_particle", blk_e[b]});
    result.blocks.push_back({b, "a", a / static_cast<double>(bs)});
    result.blocks.push_back({b, "b", bb / static_cast<double>(bs)});
  }
  result.samples = std::move(samples);
  result.final_config = std::move(config);
  return result;
}

void write_blocks_csv(std::ostream& os, const McResult& result) {
  os << "block_index,estimator,value\n";
  char buf[96];
  for (const auto& b : result.blocks) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.17g\n", b.block, b.estimator.c_str(), b.value);
    os << buf;
  }
}

}  // namespace qcorr
