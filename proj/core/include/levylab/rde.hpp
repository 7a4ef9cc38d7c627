#pragma once

#include <cstddef>
#include <vector>

#include "levylab/common.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/rng.hpp"

namespace levylab::rde {

// K largest points of the Poisson process with intensity (a/2) x^{-a/2-1} dx:
// xi_k = Gamma_k^{-2/alpha} with Gamma_k the arrival times of a unit-rate
// Poisson process. Sum_k xi_k is a positive alpha/2-stable subordinator value.
struct PoissonWeights {
  std::vector<double> weights;  // strictly decreasing, positive
  double alpha = 0.0;
  double tail_mean = 0.0;  // E sum_{k>K} xi_k
};

PoissonWeights sample_poisson_weights(double alpha, int K, Rng& rng);

// E sum_{k>K} Gamma_k^{-2/alpha}; finite for K > 2/alpha.
double poisson_weight_tail_mean(double alpha, int K);

// N samples approximating the law of the root resolvent R_0(z) of the
// recursive distributional equation R_0 = -(z + sum_k xi_k R_k)^{-1}.
struct ResolventPool {
  std::vector<cplx> samples;
  cplx z{0.0, 0.0};
  double alpha = 0.0;
  int generation = 0;
};

ResolventPool make_initial_pool(double alpha, cplx z, std::size_t size);

// One synchronous update: every new sample uses fresh weights and K parents
// drawn uniformly with replacement from the old pool. `resamples`, when
// given, counts entries redrawn because the denominator was within 1e-14
// of zero.
ResolventPool population_dynamics_step(const ResolventPool& pool, int K, Rng& rng,
                                       long* resamples = nullptr);

struct PoolRunDiagnostics {
  std::vector<double> mean_abs_frac;  // E|R|^{alpha/2} per generation
  std::vector<double> mean_im_frac;   // E(Im R)^{alpha/2} per generation
  long resamples = 0;
  double weight_tail_mean = 0.0;
};

struct PoolOptions {
  std::size_t size = 100000;
  int truncation = 200;   // K
  int generations = 50;   // total updates (burn-in included)
  double tail_budget_factor = 1e-3;  // require tail mean < factor * |z|
};

ResolventPool run_population_dynamics(double alpha, cplx z, const PoolOptions& opt, Rng& rng,
                                      PoolRunDiagnostics* diag = nullptr);

// Gamma(1-kappa) * pool mean of ((-i R) . u)^kappa; u on the first-quadrant
// unit circle. kappa = 1 omits the divergent Gamma prefactor.
cplx rde_frac_moment(const ResolventPool& pool, cplx u, double kappa);

// Real-axis fixed point of
//   a = E ((E + a^{2/a} S - b^{2/a} S')^{-1})_-^{a/2}
//   b = E ((E + a^{2/a} S - b^{2/a} S')^{-1})_+^{a/2}
// solved by damped iteration over one fixed set of (S, S') pairs, with the
// residual measured against an independent replicate set.
struct ABPoint {
  double a = 0.0, b = 0.0;
  double resid_a = 0.0, resid_b = 0.0;  // against the replicate set
  double se_a = 0.0, se_b = 0.0;        // Monte Carlo standard errors
  int iterations = 0;
};

ABPoint solve_real_axis_ab(double alpha, double E, std::size_t mc_size, Rng& rng,
                           int max_iterations = 400);

// E (Im R_0)^{alpha/2} by population dynamics at z = E + i eta for each eta,
// with the log-log slope of the value against eta.
struct VanishingDiagnostic {
  std::vector<double> etas;
  std::vector<double> mean_im_frac;
  double loglog_slope = 0.0;
};

VanishingDiagnostic vanishing_imag_diagnostic(double alpha, double E,
                                              const std::vector<double>& etas,
                                              const PoolOptions& opt, Rng& rng,
                                              double min_abs_E = 2.0);

// gamma_z sampled on a quarter-circle angle grid.
struct GammaGrid {
  std::vector<double> angles;  // in [0, pi/2], increasing
  std::vector<cplx> values;
  double alpha = 0.0;

  std::size_t size() const { return angles.size(); }
  cplx point(std::size_t j) const { return std::polar(1.0, angles[j]); }
};

GammaGrid uniform_grid(double alpha, int points);
GammaGrid gamma_grid_from_pool(const ResolventPool& pool, int points);
GammaGrid grid_difference(const GammaGrid& a, const GammaGrid& b);

double grid_sup_distance(const GammaGrid& a, const GammaGrid& b);

struct GOperatorOptions {
  quad::Options inner{1e-9, 0.0, 4000};   // r-integrals
  quad::Options mid{1e-7, 0.0, 2000};     // y-integrals
  quad::Options outer{3e-7, 0.0, 2000};   // theta-integrals
};

// One application of the fractional-moment operator
//   (G_z g)(u) = c_alpha F_{-iz}(g)(Im u + i Re u),
// c_alpha = alpha / (2^{a/2} Gamma(a/2)^2 Gamma(1-a/2)); requires alpha < 1.
GammaGrid apply_G_operator(const GammaGrid& grid, cplx z, const GOperatorOptions& opt = {});

double c_alpha_constant(double alpha);

// Discrete weighted norms over the grid. The Hoelder quotient skips grid
// points within 5e-4 of the diagonal angle pi/4 where the weight degenerates.
double norm_beta(const GammaGrid& g, double beta);
double norm_beta_eps(const GammaGrid& g, double beta, double eps);

}  // namespace levylab::rde
