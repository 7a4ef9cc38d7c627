#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "levylab/common.hpp"
#include "levylab/rng.hpp"

namespace levylab::ensemble {

// Symmetric matrix X with i.i.d. symmetric alpha-stable entries on and above
// the diagonal. The object under study is the scaled matrix A = X / n^{1/alpha}.
class WignerLevyMatrix {
 public:
  WignerLevyMatrix(int n, double alpha, std::uint64_t seed, Eigen::MatrixXd entries);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  double a_n() const;
  const Eigen::MatrixXd& entries() const { return entries_; }  // unscaled X
  Eigen::MatrixXd scaled() const { return entries_ / a_n(); }

 private:
  int n_;
  double alpha_;
  std::uint64_t seed_;
  Eigen::MatrixXd entries_;
};

// Deterministic in (n, alpha, seed): the upper triangle (diagonal included)
// is filled row by row and mirrored.
WignerLevyMatrix build_matrix(int n, double alpha, std::uint64_t seed);

// Full eigendecomposition of A = X / a_n; eigenvalues ascending, column k of
// `eigenvectors` paired with eigenvalue k.
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(eigenvalues.size()); }
  // Accessor in the descending convention lambda_1 >= ... >= lambda_n.
  double lambda_desc(int k) const { return eigenvalues[eigenvalues.size() - k]; }
};

SpectralData spectrum(const WignerLevyMatrix& m);

// Eigenvalues only (no vectors); ascending.
Eigen::VectorXd spectrum_values(const WignerLevyMatrix& m);

// Eigenpairs of A with eigenvalue in (lo, hi]; ascending.
struct WindowSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};
WindowSpectrum spectrum_window(const WignerLevyMatrix& m, double lo, double hi);

// N_I = #{ eigenvalues in [a,b] }; mu_A(I) = N_I / n.
int interval_count(const Eigen::VectorXd& sorted_eigenvalues, double a, double b);
int interval_count(const SpectralData& spec, double a, double b);

// Diagonal of the resolvent R(z) = (A - z)^{-1}, all n entries.
Eigen::VectorXcd resolvent_diag(const SpectralData& spec, cplx z);

// tr R(z) R*(z) = sum_j |lambda_j - z|^{-2}.
double trace_resolvent_square(const SpectralData& spec, cplx z);

// Counting bound 4 eta^2 a_n^2 sum_k dist(X_k, minor window span)^{-2} for
// I = [E-eta, E+eta], where dist_k^2 is the squared mass of row X_k on the
// minor eigenvectors with eigenvalue inside I. Returns +infinity when some
// minor has no eigenvalue in I (the inequality holds trivially).
// stride > 1 subsamples k and rescales; the result is then a diagnostic
// estimate rather than a guaranteed bound.
double esy_counting_bound(const WignerLevyMatrix& m, double E, double eta, int stride = 1);

// Gamma(1-kappa) * (1/n) sum_k ((-i R_kk) . u)^kappa with h.u defined as
// Re(u) h + Im(u) conj(h); u on the closed first-quadrant unit circle.
// At kappa = 1 the Gamma prefactor diverges and is omitted: the result is
// then the plain mean of -i R_kk.
cplx empirical_frac_moment(const SpectralData& spec, cplx z, cplx u, double kappa);

// (1/n) sum_k (Im R_kk)^kappa.
double frac_moment_imag(const SpectralData& spec, cplx z, double kappa);

}  // namespace levylab::ensemble
