#pragma once

#include <functional>

#include "levylab/common.hpp"

namespace levylab::quad {

struct Options {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;     // absolute floor added to the target
  int max_panels = 4000;    // refinement budget per integral
};

struct Result {
  cplx value{0.0, 0.0};
  double error = 0.0;   // estimated absolute error
  int evals = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 7/15 for complex-valued integrands on [a, b].
Result integrate(const std::function<cplx(double)>& f, double a, double b, const Options& opt = {});

// Throws numerical_error (carrying the estimate) if the estimator stays above
// tolerance after the refinement budget.
cplx integrate_or_throw(const std::function<cplx(double)>& f, double a, double b,
                        const Options& opt, const char* what);

// K(gamma, h, x) = integral_0^inf r^{gamma-1} exp(-r h) exp(-r^s x) dr
// for h in K_1 \ {0}, x in K_{s/...}: any x with Re(x e^{i th s}) bounded;
// s in (0,1), gamma > 0.
//
// The contour is rotated onto the ray where r*h is real positive, and for
// gamma < 1 the endpoint singularity is removed by the substitution
// r = u^{1/gamma}.
cplx stable_exp_kernel(double gamma, double s, cplx h, cplx x, const Options& opt = {});

}  // namespace levylab::quad
