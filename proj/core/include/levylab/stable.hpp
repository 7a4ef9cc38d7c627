#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "levylab/common.hpp"
#include "levylab/rng.hpp"

namespace levylab::stable {

// Normalization constant w_alpha = pi / (sin(pi a/2) Gamma(a)). A symmetric
// stable law with characteristic function exp(-w_alpha |t|^alpha) has
// one-sided tail P(X >= t) ~ t^{-alpha} (two-sided 2 t^{-alpha}).
double w_alpha(double alpha);

// Laplace constant for totally skewed positive laws, alpha in (0,1):
// v_alpha = (2/pi) sin(pi a/2) Gamma(1-a) Gamma(a).
double v_alpha(double alpha);

struct StableParams {
  double alpha;  // index, strictly inside (0,2)
  double beta;   // skewness in [-1,1]
  double sigma;  // scale > 0

  StableParams(double alpha_, double beta_ = 0.0, double sigma_ = 1.0);

  double w() const { return w_alpha(alpha); }
  double v() const { return v_alpha(alpha); }
};

// One draw with characteristic function exp(-w_alpha |t|^alpha), via the
// Chambers-Mallows-Stuck transform scaled by w_alpha^{1/alpha}.
double sym_stable_draw(double alpha, Rng& rng);
std::vector<double> sample_sym_stable(double alpha, std::size_t count, Rng& rng);

// One positive draw with Laplace transform exp(-sigma^a t^a v_a), a in (0,1),
// via Kanter's representation.
double pos_stable_draw(double alpha, double sigma, Rng& rng);
std::vector<double> sample_pos_stable(double alpha, double sigma, std::size_t count, Rng& rng);

// <X, AX> for X i.i.d. symmetric alpha-stable (the w_alpha normalization)
// splits in law into an independent pair: ||A^{1/2}G||_alpha^2 with G standard
// Gaussian, times a positive alpha/2-stable factor.
struct QuadraticFormSplit {
  double gauss_norm_sq;   // ||A^{1/2} G||_alpha^2
  double stable_factor;   // S ~ Stab_{a/2}(1, 2 sigma^2 v_{a/2}^{-2/a})
  double product;         // distributed as <X, AX>
};

QuadraticFormSplit quadratic_form_split(const Eigen::MatrixXd& psd, double alpha, Rng& rng);

// Partial sum of the series for E exp(c S^{-a/(1-a)}), S ~ Stab_a(1, sigma).
// The moment is finite only for c below a critical value; divergence is
// detected from the term ratios rather than computed in closed form.
struct SeriesValue {
  double value = 0.0;
  bool diverged = false;
  int terms_used = 0;
};

SeriesValue inverse_stable_exp_moment(double c, double alpha, double sigma, int terms);

}  // namespace levylab::stable
