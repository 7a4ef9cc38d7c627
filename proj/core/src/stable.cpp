#include "levylab/stable.hpp"

#include <cmath>

namespace levylab::stable {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

double w_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "w_alpha: alpha must be in (0,2)");
  return kPi / (std::sin(kHalfPi * alpha) * std::tgamma(alpha));
}

double v_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "v_alpha: alpha must be in (0,1)");
  return (2.0 / kPi) * std::sin(kHalfPi * alpha) * std::tgamma(1.0 - alpha) * std::tgamma(alpha);
}

StableParams::StableParams(double alpha_, double beta_, double sigma_)
    : alpha(alpha_), beta(beta_), sigma(sigma_) {
  require(alpha > 0.0 && alpha < 2.0, "StableParams: alpha must be strictly inside (0,2)");
  require(beta >= -1.0 && beta <= 1.0, "StableParams: beta must be in [-1,1]");
  require(sigma > 0.0, "StableParams: sigma must be > 0");
}

double sym_stable_draw(double alpha, Rng& rng) {
  // CMS for beta = 0: U uniform on (-pi/2, pi/2), W exponential(1). The raw
  // draw has cf exp(-|t|^alpha); scaling by w_alpha^{1/alpha} gives
  // exp(-w_alpha |t|^alpha). Continuous through alpha = 1 (Cauchy).
  const double u = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double x = std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  return std::pow(w_alpha(alpha), 1.0 / alpha) * x;
}

std::vector<double> sample_sym_stable(double alpha, std::size_t count, Rng& rng) {
  require(alpha > 0.0 && alpha < 2.0, "sample_sym_stable: alpha must be in (0,2)");
  const double scale = std::pow(w_alpha(alpha), 1.0 / alpha);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double u = kPi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    x = scale * std::sin(alpha * u) / std::pow(std::cos(u), 1.0 / alpha) *
        std::pow(std::cos((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
  }
  return out;
}

double pos_stable_draw(double alpha, double sigma, Rng& rng) {
  // Kanter: S0 = sin(aV)/(sin V)^{1/a} * (sin((1-a)V)/W)^{(1-a)/a} has
  // E exp(-t S0) = exp(-t^a); the prefactor matches the sigma^a v_a scaling.
  const double v = kPi * rng.uniform();
  const double w = rng.exponential();
  const double s0 = std::sin(alpha * v) / std::pow(std::sin(v), 1.0 / alpha) *
                    std::pow(std::sin((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return sigma * std::pow(v_alpha(alpha), 1.0 / alpha) * s0;
}

std::vector<double> sample_pos_stable(double alpha, double sigma, std::size_t count, Rng& rng) {
  require(alpha > 0.0 && alpha < 1.0,
          "sample_pos_stable: index must be in (0,1) for a positive stable law");
  require(sigma > 0.0, "sample_pos_stable: sigma must be > 0");
  std::vector<double> out(count);
  for (auto& x : out) x = pos_stable_draw(alpha, sigma, rng);
  return out;
}

QuadraticFormSplit quadratic_form_split(const Eigen::MatrixXd& psd, double alpha, Rng& rng) {
  require(alpha > 0.0 && alpha < 2.0, "quadratic_form_split: alpha must be in (0,2)");
  require(psd.rows() == psd.cols(), "quadratic_form_split: matrix must be square");
  const Eigen::Index n = psd.rows();
  require((psd - psd.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + psd.cwiseAbs().maxCoeff()),
          "quadratic_form_split: matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psd);
  if (es.info() != Eigen::Success)
    throw numerical_error("quadratic_form_split: eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues();
  const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1.0e-300);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] < -1e-10 * scale)
      throw std::domain_error("quadratic_form_split: matrix is not positive semi-definite");
    if (lambda[i] < 0.0) lambda[i] = 0.0;  // clamp roundoff negatives
  }

  // q = A^{1/2} G  via the spectral factorization.
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.normal();
  Eigen::VectorXd q = es.eigenvectors() * (lambda.cwiseSqrt().asDiagonal() * (es.eigenvectors().transpose() * g));

  double norm_a = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) norm_a += std::pow(std::abs(q[i]), alpha);
  const double norm_sq = std::pow(norm_a, 2.0 / alpha);

  const double sigma = std::pow(w_alpha(alpha), 1.0 / alpha);
  const double sigma_s = 2.0 * sigma * sigma * std::pow(v_alpha(alpha / 2.0), -2.0 / alpha);
  const double s = pos_stable_draw(alpha / 2.0, sigma_s, rng);

  QuadraticFormSplit split;
  split.gauss_norm_sq = norm_sq;
  split.stable_factor = s;
  split.product = norm_sq * s;
  return split;
}

SeriesValue inverse_stable_exp_moment(double c, double alpha, double sigma, int terms) {
  require(c > 0.0, "inverse_stable_exp_moment: c must be > 0");
  require(alpha > 0.0 && alpha < 1.0, "inverse_stable_exp_moment: alpha must be in (0,1)");
  require(sigma > 0.0, "inverse_stable_exp_moment: sigma must be > 0");
  require(terms >= 10, "inverse_stable_exp_moment: need at least 10 terms");

  const double p = alpha / (1.0 - alpha);
  const double log_sigma_hat = std::log(sigma) + std::log(v_alpha(alpha)) / alpha;
  const double log_c = std::log(c);

  SeriesValue out;
  double sum = 1.0;  // k = 0 term
  double prev = 0.0;
  int increasing = 0;
  for (int k = 1; k <= terms; ++k) {
    // E S^{-kp} = sigma_hat^{-kp} Gamma(kp/alpha) / (alpha Gamma(kp))
    const double kp = static_cast<double>(k) * p;
    const double log_term = static_cast<double>(k) * log_c - kp * log_sigma_hat +
                            std::lgamma(kp / alpha) - std::lgamma(kp) -
                            std::lgamma(static_cast<double>(k) + 1.0) - std::log(alpha);
    const double term = std::exp(log_term);
    sum += term;
    out.terms_used = k;
    if (k > 1 && term > prev) {
      if (++increasing >= 20) {
        out.diverged = true;
        break;
      }
    } else {
      increasing = 0;
    }
    if (term < 1e-14 * sum) break;
    prev = term;
  }
  out.value = sum;
  return out;
}

}  // namespace levylab::stable
