#pragma once

#include <vector>

#include "levylab/common.hpp"
#include "levylab/quadrature.hpp"

namespace levylab::limitlaw {

// Complex value tagged with the cone K_beta = { |arg| <= pi*beta/2 } it must
// live in. Construction rejects values outside the cone (beyond slack).
struct ConeValue {
  cplx value{0.0, 0.0};
  double cone_index = 1.0;

  ConeValue() = default;
  ConeValue(cplx v, double beta, double slack = 1e-12);
};

struct SolveOptions {
  double tol = 1e-10;           // fixed-point residual target
  double tau_prime = 0.25;      // continuation step factor near eta ~ 1
  double geometric_step = 0.6;  // eta reduction factor once steps would stall
  int max_total_iterations = 10000;
  bool allow_flagged = true;    // return a flagged result instead of throwing
  quad::Options quad{1e-11, 0.0, 4000};
};

// Solved point: y solves y = 2 phi_{alpha,z}(y) and g = i psi_{alpha,z}(y).
// The factor 2 carries the two-sided tail of the w_alpha entry normalization
// (P(|X| >= t) ~ 2 t^-alpha) into the fixed point; with it the solved g
// matches empirical Stieltjes transforms of the sampled ensemble.
struct LimitPoint {
  cplx z{0.0, 0.0};
  ConeValue y;
  cplx g{0.0, 0.0};
  double residual = 0.0;
  int path_length = 0;                 // continuation levels used
  bool suspected_exceptional = false;  // continuation kept failing near this E
};

struct DensityEstimate {
  double value = 0.0;  // eta -> 0 extrapolation of Im g / pi
  std::vector<double> etas;
  std::vector<double> f_eta;       // (1/pi) Im g at each eta
  std::vector<double> residuals;
  bool monotone = true;
  bool suspected_exceptional = false;
};

struct MassEstimate {
  double value = 0.0;
  double error_bound = 0.0;  // L * eta * log(1 + |I|/eta), unit front constant
  double stieltjes_sup = 0.0;
};

// Immutable per-alpha solver; all methods are const and thread-safe.
class LimitLaw {
 public:
  explicit LimitLaw(double alpha, SolveOptions opt = {});

  double alpha() const { return alpha_; }
  // Smallest |z| on the imaginary-axis test ray where Picard contracts with
  // factor < 0.9 over 20 iterations.
  double contraction_threshold() const { return e0_; }

  cplx phi(cplx z, cplx x) const;
  cplx psi(cplx z, cplx x) const;
  cplx phi_prime(cplx z, cplx x) const;

  LimitPoint solve(cplx z) const;
  // Refine from a caller-supplied start (no continuation ladder); falls back
  // to solve(z) if the start is outside the basin.
  LimitPoint solve_from(cplx z, cplx y_start) const;

  DensityEstimate density(double E, const std::vector<double>& etas) const;
  MassEstimate interval_mass(double a, double b, double eta) const;

 private:
  struct Refined {
    cplx y;
    double residual;
    int iterations;
    bool ok;
  };
  Refined refine(cplx z, cplx y0, int picard_budget, int newton_budget) const;

  double alpha_;
  double gamma_factor_;  // Gamma(1 - alpha/2)
  double inv_gamma_half_;
  SolveOptions opt_;
  double e0_;
};

// (1/pi) Im g tabulated over a uniform grid, extrapolated to eta -> 0, with
// interval masses by exact integration of the piecewise-linear interpolant.
// Used where many interval masses against one alpha are needed.
class DensityTable {
 public:
  DensityTable(const LimitLaw& law, double emin, double emax, int points,
               std::vector<double> etas = {4e-3, 2e-3, 1e-3});

  double emin() const { return emin_; }
  double emax() const { return emax_; }
  double density_at(double E) const;
  double mass(double a, double b) const;

 private:
  double emin_, emax_, step_;
  std::vector<double> values_;
};

}  // namespace levylab::limitlaw
