#pragma once

#include <cstdint>
#include <vector>

#include "levylab/io.hpp"
#include "levylab/rde.hpp"

namespace levylab::experiments {

// Local-law interval exponent rho and the Wegner exponent gamma = (1/2+1/a)^{-1}.
struct RhoGamma {
  double alpha = 0.0;
  double rho = 0.0;
  double gamma_exp = 0.0;
};

RhoGamma rho_of_alpha(double alpha);

struct LocalLawConfig {
  double alpha = 1.5;
  std::vector<int> n_list = {500, 2000};
  double window_lo = 1.0;
  double window_hi = 2.0;
  int trials = 50;
  double c1 = 0.1;  // interval length c1 n^{-rho} (log n)^2
  std::uint64_t seed = 1;
  int workers = 1;
  int table_points = 1200;
};

// |mu_A(I) - mu_alpha(I)| / |I| on shrinking intervals, against the solved
// limit masses; medians per n and their trend.
io::json local_law_experiment(const LocalLawConfig& cfg);

struct ConcentrationConfig {
  double alpha = 1.5;
  int n = 500;
  int seeds = 500;
  double a = 1.0, b = 2.0;               // fixed interval
  std::vector<double> t_list = {0.01, 0.02};
  std::uint64_t seed = 1;
  int workers = 1;
};

// Empirical P(|mu_A(I) - mean| >= t) against the 2 exp(-n t^2 / 2) envelope.
io::json concentration_experiment(const ConcentrationConfig& cfg);

struct WegnerConfig {
  double alpha = 0.8;
  int n = 1000;
  std::vector<double> etas = {0.012, 0.024, 0.06, 0.12};
  double E = 1.0;
  int trials = 300;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Quantiles of N_I / (n eta^gamma) for I = [E-eta, E+eta]; runs with eta
// below n^{-(alpha+2)/4} are marked out of regime rather than rejected.
io::json wegner_experiment(const WegnerConfig& cfg);

struct DelocConfig {
  double alpha = 1.5;
  std::vector<int> n_list = {500, 1000, 2000, 4000};
  double window_lo = 1.0;
  double window_hi = 2.0;
  int trials = 30;
  std::uint64_t seed = 1;
  int workers = 1;
};

// max ||v||_inf over eigenvectors with eigenvalue in the window, per n, with
// the log-log slope of the medians and the predicted (constant-free) exponent.
io::json delocalization_stats(const DelocConfig& cfg);

struct LocConfig {
  double alpha = 0.5;
  int n = 2000;
  double window_lo = 8.0, window_hi = 12.0;   // large-|E| window
  double bulk_lo = 0.2, bulk_hi = 0.5;        // contrast window
  double kappa = 0.0;                         // 0 -> defaults to 0.8 * alpha/2
  double mass_delta = 0.1;
  int seeds = 20;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Eigenvector mass profiles W_I, their alpha/2-fractional moment and the
// size of the set carrying all but `mass_delta` of the mass.
io::json localization_stats(const LocConfig& cfg);

struct FracVanishConfig {
  double alpha = 0.5;
  std::vector<int> n_list = {500, 1000, 2000};
  double E = 10.0;
  double bulk_E = 0.3;
  int trials = 20;
  std::uint64_t seed = 1;
  int workers = 1;
  bool compare_rde = true;
  rde::PoolOptions pool{};
};

// (1/n) sum (Im R_ii)^{alpha/2} at eta = n^{-1/6}: n-trend, bulk contrast and
// the population-dynamics value at the largest n.
io::json frac_moment_vanishing_experiment(const FracVanishConfig& cfg);

struct GaussProjConfig {
  int n = 400;
  std::vector<int> d_list = {100, 200, 400};
  double p = 1.0;
  double delta = 0.1;
  int trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
};

// Failure frequency of ||P G||_p >= delta (tr P^p)^{1/p} over random rank-d
// projections.
io::json gaussian_projection_check(const GaussProjConfig& cfg);

}  // namespace levylab::experiments
