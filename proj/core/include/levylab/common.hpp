#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace levylab {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "levylab 0.1.0";

// Numerical failure (quadrature, eigensolver, fixed-point non-convergence).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Parameters are individually valid but outside the regime an operation
// supports (e.g. Wegner window below the n^{-(alpha+2)/4} cutoff).
class out_of_regime_error : public std::runtime_error {
 public:
  explicit out_of_regime_error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// |arg(v)| <= pi*beta/2 + slack, with 0 considered a member of every cone.
inline bool in_cone(cplx v, double beta, double slack = 1e-12) {
  if (v == cplx(0.0, 0.0)) return true;
  return std::abs(std::arg(v)) <= 1.5707963267948966 * beta + slack;
}

// Bilinear form h.u = Re(u) h + Im(u) conj(h); maps K_1 x (first quadrant)
// into K_1 and is linear in u over nonnegative reals.
inline cplx dot_form(cplx h, cplx u) { return u.real() * h + u.imag() * std::conj(h); }

// |i.u| = |Re(u) - Im(u)|, the weight that degenerates on the diagonal ray.
inline double i_dot(cplx u) { return std::abs(u.real() - u.imag()); }

}  // namespace levylab
