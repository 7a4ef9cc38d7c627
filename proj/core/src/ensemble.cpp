#include "levylab/ensemble.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levylab/stable.hpp"

namespace levylab::ensemble {

WignerLevyMatrix::WignerLevyMatrix(int n, double alpha, std::uint64_t seed, Eigen::MatrixXd entries)
    : n_(n), alpha_(alpha), seed_(seed), entries_(std::move(entries)) {
  require(n_ >= 2, "WignerLevyMatrix: n must be >= 2");
  require(alpha_ > 0.0 && alpha_ < 2.0, "WignerLevyMatrix: alpha must be in (0,2)");
}

double WignerLevyMatrix::a_n() const { return std::pow(static_cast<double>(n_), 1.0 / alpha_); }

WignerLevyMatrix build_matrix(int n, double alpha, std::uint64_t seed) {
  require(n >= 2, "build_matrix: n must be >= 2");
  require(alpha > 0.0 && alpha < 2.0, "build_matrix: alpha must be in (0,2)");
  Rng rng(seed);
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = stable::sym_stable_draw(alpha, rng);
      x(i, j) = v;
      x(j, i) = v;
    }
  return WignerLevyMatrix(n, alpha, seed, std::move(x));
}

SpectralData spectrum(const WignerLevyMatrix& m) {
  const int n = m.n();
  SpectralData out;
  out.alpha = m.alpha();
  out.seed = m.seed();
  out.eigenvectors = m.scaled();
  out.eigenvalues.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         out.eigenvectors.data(), n, out.eigenvalues.data());
  if (info != 0)
    throw numerical_error("spectrum: dsyevd failed (info=" + std::to_string(info) +
                          ", seed=" + std::to_string(m.seed()) + ")");
  return out;
}

Eigen::VectorXd spectrum_values(const WignerLevyMatrix& m) {
  const int n = m.n();
  Eigen::MatrixXd a = m.scaled();
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0)
    throw numerical_error("spectrum_values: dsyev failed (info=" + std::to_string(info) +
                          ", seed=" + std::to_string(m.seed()) + ")");
  return w;
}

WindowSpectrum spectrum_window(const WignerLevyMatrix& m, double lo, double hi) {
  require(lo < hi, "spectrum_window: need lo < hi");
  const int n = m.n();
  Eigen::MatrixXd a = m.scaled();
  Eigen::VectorXd w(n);
  Eigen::MatrixXd zvec(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, n)));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, a.data(), n, lo, hi, 0, 0, 0.0, &found,
                     w.data(), zvec.data(), n, isuppz.data());
  if (info != 0)
    throw numerical_error("spectrum_window: dsyevr failed (info=" + std::to_string(info) +
                          ", seed=" + std::to_string(m.seed()) + ")");
  WindowSpectrum out;
  out.eigenvalues = w.head(found);
  out.eigenvectors = zvec.leftCols(found);
  return out;
}

int interval_count(const Eigen::VectorXd& ev, double a, double b) {
  require(a <= b, "interval_count: need a <= b");
  const double* begin = ev.data();
  const double* end = ev.data() + ev.size();
  return static_cast<int>(std::upper_bound(begin, end, b) - std::lower_bound(begin, end, a));
}

int interval_count(const SpectralData& spec, double a, double b) {
  return interval_count(spec.eigenvalues, a, b);
}

Eigen::VectorXcd resolvent_diag(const SpectralData& spec, cplx z) {
  require(z.imag() > 0.0, "resolvent_diag: Im z must be > 0");
  const int n = spec.n();
  Eigen::VectorXcd weights(n);
  for (int i = 0; i < n; ++i) weights[i] = 1.0 / (spec.eigenvalues[i] - z);
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const auto col = spec.eigenvectors.col(i);
    const cplx w = weights[i];
    for (int k = 0; k < n; ++k) diag[k] += col[k] * col[k] * w;
  }
  return diag;
}

double trace_resolvent_square(const SpectralData& spec, cplx z) {
  require(z.imag() > 0.0, "trace_resolvent_square: Im z must be > 0");
  double s = 0.0;
  for (int i = 0; i < spec.n(); ++i) s += 1.0 / std::norm(spec.eigenvalues[i] - z);
  return s;
}

double esy_counting_bound(const WignerLevyMatrix& m, double E, double eta, int stride) {
  require(eta > 0.0, "esy_counting_bound: eta must be > 0");
  require(stride >= 1, "esy_counting_bound: stride must be >= 1");
  const int n = m.n();
  const double a_n = m.a_n();
  const double lo = E - eta, hi = E + eta;

  Eigen::MatrixXd minor(n - 1, n - 1);
  Eigen::VectorXd w(n - 1);
  Eigen::MatrixXd zvec(n - 1, n - 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  double sum_inv = 0.0;
  int sampled = 0;
  for (int k = 0; k < n; k += stride) {
    // principal minor of the scaled matrix, row/column k removed
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == k) continue;
      for (int i = 0, ii = 0; i < n; ++i) {
        if (i == k) continue;
        minor(ii, jj) = m.entries()(i, j) / a_n;
        ++ii;
      }
      ++jj;
    }
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n - 1, minor.data(), n - 1, lo, hi, 0, 0,
                       0.0, &found, w.data(), zvec.data(), n - 1, isuppz.data());
    if (info != 0)
      throw numerical_error("esy_counting_bound: dsyevr failed (seed=" +
                            std::to_string(m.seed()) + ")");
    ++sampled;
    if (found == 0) return std::numeric_limits<double>::infinity();

    // squared mass of the unscaled row X_k on the in-window eigenvectors
    Eigen::VectorXd xk(n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
      if (i == k) continue;
      xk[ii++] = m.entries()(i, k);
    }
    double dist_sq = 0.0;
    for (int c = 0; c < found; ++c) {
      const double proj = zvec.col(c).head(n - 1).dot(xk);
      dist_sq += proj * proj;
    }
    if (dist_sq <= 0.0)
      throw numerical_error("esy_counting_bound: row orthogonal to the window span");
    sum_inv += 1.0 / dist_sq;
  }
  const double scale = static_cast<double>(n) / static_cast<double>(sampled);
  return 4.0 * eta * eta * a_n * a_n * sum_inv * (stride > 1 ? scale : 1.0);
}

cplx empirical_frac_moment(const SpectralData& spec, cplx z, cplx u, double kappa) {
  require(kappa > 0.0 && kappa <= 1.0, "empirical_frac_moment: kappa must be in (0,1]");
  require(u.real() >= 0.0 && u.imag() >= 0.0,
          "empirical_frac_moment: u must lie in the closed first quadrant");
  require(std::abs(std::abs(u) - 1.0) <= 1e-9, "empirical_frac_moment: u must be unit modulus");
  const Eigen::VectorXcd diag = resolvent_diag(spec, z);
  cplx acc(0.0, 0.0);
  for (int k = 0; k < spec.n(); ++k) {
    const cplx h = -cplx(0.0, 1.0) * diag[k];
    acc += std::pow(dot_form(h, u), kappa);
  }
  acc /= static_cast<double>(spec.n());
  if (kappa < 1.0) acc *= std::tgamma(1.0 - kappa);
  return acc;
}

double frac_moment_imag(const SpectralData& spec, cplx z, double kappa) {
  require(kappa > 0.0 && kappa <= 1.0, "frac_moment_imag: kappa must be in (0,1]");
  const Eigen::VectorXcd diag = resolvent_diag(spec, z);
  double acc = 0.0;
  for (int k = 0; k < spec.n(); ++k) acc += std::pow(diag[k].imag(), kappa);
  return acc / static_cast<double>(spec.n());
}

}  // namespace levylab::ensemble
