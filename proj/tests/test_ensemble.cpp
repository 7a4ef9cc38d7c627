#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "levylab/ensemble.hpp"
#include "levylab/limitlaw.hpp"
#include "levylab/stats.hpp"

using namespace levylab;
namespace en = levylab::ensemble;

TEST_CASE("build_matrix: symmetric, deterministic, validated") {
  const auto m = en::build_matrix(6, 1.5, 123);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(m.entries()(i, j) == m.entries()(j, i));
  const auto m2 = en::build_matrix(6, 1.5, 123);
  CHECK(m.entries() == m2.entries());
  const auto m3 = en::build_matrix(6, 1.5, 124);
  CHECK(m.entries() != m3.entries());
  CHECK_THROWS_AS(en::build_matrix(1, 1.5, 1), std::invalid_argument);
  CHECK(m.a_n() == doctest::Approx(std::pow(6.0, 1.0 / 1.5)));
}

TEST_CASE("build_matrix: scaled maxima follow the Frechet law") {
  // max |X_ij| over the n(n+1)/2 independent entries, scaled by (2N)^{1/a}
  // with N the entry count, has survival 1 - exp(-t^-alpha).
  const double alpha = 1.5;
  const int n = 500, seeds = 200;
  const double count = 0.5 * n * (n + 1);
  std::vector<double> scaled(seeds);
  for (int s = 0; s < seeds; ++s) {
    const auto m = en::build_matrix(n, alpha, derive_seed(777, 0, s));
    double mx = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) mx = std::max(mx, std::abs(m.entries()(i, j)));
    scaled[s] = mx / std::pow(2.0 * count, 1.0 / alpha);
  }
  for (double t : {1.0, 2.0}) {
    int above = 0;
    for (double x : scaled)
      if (x > t) ++above;
    const double expected = 1.0 - std::exp(-std::pow(t, -alpha));
    const double se = std::sqrt(expected * (1.0 - expected) / seeds);
    CHECK(std::abs(static_cast<double>(above) / seeds - expected) < 3.0 * se);
  }
}

TEST_CASE("spectrum: 2x2 closed form") {
  Eigen::MatrixXd x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const en::WignerLevyMatrix m(2, 1.3, 0, x);
  const auto spec = en::spectrum(m);
  const double expected = std::pow(2.0, -1.0 / 1.3);
  CHECK(spec.eigenvalues[0] == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(spec.eigenvalues[1] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(spec.lambda_desc(1) == spec.eigenvalues[1]);
}

TEST_CASE("spectrum: trace identities and orthonormality") {
  const int n = 1000;
  const auto m = en::build_matrix(n, 1.5, 2027);
  const auto spec = en::spectrum(m);

  const double a_n = m.a_n();
  const double scale = spec.eigenvalues.cwiseAbs().maxCoeff();
  CHECK(std::abs(spec.eigenvalues.sum() - m.entries().trace() / a_n) < 1e-8 * n * scale);

  // sum lambda^2 = sum_ij A_ij^2
  const double sum_sq = spec.eigenvalues.squaredNorm();
  const double frob = (m.entries() / a_n).squaredNorm();
  CHECK(std::abs(sum_sq - frob) < 1e-6 * frob);

  const Eigen::MatrixXd gram =
      spec.eigenvectors.transpose() * spec.eigenvectors - Eigen::MatrixXd::Identity(n, n);
  CHECK(gram.norm() < 1e-8);

  // eigen residual per column
  const Eigen::MatrixXd a = m.scaled();
  for (int k : {0, n / 2, n - 1}) {
    const double res = (a * spec.eigenvectors.col(k) -
                        spec.eigenvalues[k] * spec.eigenvectors.col(k))
                           .norm();
    CHECK(res < 1e-6 * scale);
  }
}

TEST_CASE("spectrum_window agrees with the full decomposition") {
  const auto m = en::build_matrix(300, 1.2, 5);
  const auto spec = en::spectrum(m);
  const auto ws = en::spectrum_window(m, 0.5, 1.5);
  CHECK(ws.eigenvalues.size() == en::interval_count(spec, 0.5 + 1e-12, 1.5));
  const Eigen::MatrixXd a = m.scaled();
  for (Eigen::Index c = 0; c < ws.eigenvalues.size(); ++c) {
    CHECK((a * ws.eigenvectors.col(c) - ws.eigenvalues[c] * ws.eigenvectors.col(c)).norm() <
          1e-6 * (1.0 + std::abs(ws.eigenvalues[c])));
    CHECK(ws.eigenvectors.col(c).norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("interval_count edge cases") {
  const auto m = en::build_matrix(50, 1.1, 9);
  const auto spec = en::spectrum(m);
  const double lo = spec.eigenvalues[0], hi = spec.eigenvalues[49];
  CHECK(en::interval_count(spec, lo, hi) == 50);
  // a point that is not an eigenvalue
  const double c = 0.5 * (spec.eigenvalues[10] + spec.eigenvalues[11]);
  CHECK(en::interval_count(spec, c, c) == 0);
  CHECK_THROWS_AS(en::interval_count(spec, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("interval counts approach the limit density") {
  const double alpha = 1.5;
  const int n = 2000, seeds = 6;
  const double a = 1.0, b = 1.2;
  std::vector<double> ratios(seeds);
  for (int s = 0; s < seeds; ++s) {
    const auto m = en::build_matrix(n, alpha, derive_seed(4242, 0, s));
    const auto ev = en::spectrum_values(m);
    ratios[s] = en::interval_count(ev, a, b) / (n * (b - a));
  }
  const limitlaw::LimitLaw law(alpha);
  const double limit = law.interval_mass(a, b, 2e-3).value / (b - a);
  const double se = stats::std_error(ratios);
  CHECK(std::abs(stats::mean(ratios) - limit) < 4.0 * se + 0.01);
}

TEST_CASE("resolvent diagonal: Herglotz, bound and the mean identity") {
  const auto m = en::build_matrix(500, 1.2, 31);
  const auto spec = en::spectrum(m);
  const cplx z(2.0, 0.5);
  const auto diag = en::resolvent_diag(spec, z);

  cplx direct(0.0, 0.0);
  for (int i = 0; i < 500; ++i) direct += 1.0 / (spec.eigenvalues[i] - z);
  direct /= 500.0;

  cplx mean(0.0, 0.0);
  for (int k = 0; k < 500; ++k) {
    CHECK(diag[k].imag() > 0.0);
    CHECK(std::abs(diag[k]) <= 1.0 / z.imag() + 1e-12);
    mean += diag[k];
  }
  mean /= 500.0;
  CHECK(std::abs(mean - direct) < 1e-10);
  CHECK_THROWS_AS(en::resolvent_diag(spec, cplx(1.0, -0.1)), std::invalid_argument);
}

TEST_CASE("trace of |R|^2: closed forms and identities") {
  SUBCASE("single isolated eigenvalue") {
    Eigen::MatrixXd x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const en::WignerLevyMatrix m(2, 1.0, 0, x);
    const auto spec = en::spectrum(m);
    const double lam = spec.eigenvalues[1];
    const double eta = 1e-3;
    // both eigenvalues contribute; the distant one adds |2 lam - i eta|^-2
    const double got = en::trace_resolvent_square(spec, cplx(lam, eta));
    const double expected = 1.0 / (eta * eta) + 1.0 / (4.0 * lam * lam + eta * eta);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("identity with Im g and brute force") {
    const auto m = en::build_matrix(500, 1.2, 77);
    const auto spec = en::spectrum(m);
    const cplx z(1.0, 0.3);
    const double got = en::trace_resolvent_square(spec, z);
    double brute = 0.0;
    cplx g(0.0, 0.0);
    for (int i = 0; i < 500; ++i) {
      brute += 1.0 / std::norm(spec.eigenvalues[i] - z);
      g += 1.0 / (spec.eigenvalues[i] - z);
    }
    g /= 500.0;
    CHECK(got == doctest::Approx(brute).epsilon(1e-12));
    CHECK(got == doctest::Approx(500.0 * g.imag() / z.imag()).epsilon(1e-10));
  }
}

TEST_CASE("counting bound dominates N_I and minors interlace") {
  const double alpha = 0.8;
  const int n = 120;
  const double E = 1.0, eta = 0.25;
  const auto m = en::build_matrix(n, alpha, 1818);
  const auto spec = en::spectrum(m);
  const int count = en::interval_count(spec, E - eta, E + eta);

  const double bound = en::esy_counting_bound(m, E, eta);
  CHECK(bound >= static_cast<double>(count) * (1.0 - 1e-6));

  // Weyl interlacing against the first minor, via indicator sums at random s
  Eigen::MatrixXd minor = m.scaled().bottomRightCorner(n - 1, n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(minor, Eigen::EigenvaluesOnly);
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = -3.0 + 6.0 * rng.uniform();
    int full = 0, sub = 0;
    for (int i = 0; i < n; ++i)
      if (spec.eigenvalues[i] <= s) ++full;
    for (int i = 0; i + 1 < n; ++i)
      if (es.eigenvalues()[i] <= s) ++sub;
    CHECK(std::abs(full - sub) <= 1);
  }
}

TEST_CASE("fractional moments of the resolvent diagonal") {
  const auto m = en::build_matrix(300, 0.5, 99);
  const auto spec = en::spectrum(m);
  const cplx z(5.0, 0.2);
  const double kappa = 0.25;

  SUBCASE("u on the diagonal ray reduces to the imaginary-part moment") {
    const cplx u = std::polar(1.0, 0.78539816339744831);  // e^{i pi/4}
    const cplx via_u = en::empirical_frac_moment(spec, z, u, kappa);
    const double direct = en::frac_moment_imag(spec, z, kappa);
    const double factor = std::tgamma(1.0 - kappa) * std::pow(std::sqrt(2.0), kappa);
    CHECK(std::abs(via_u - factor * direct) < 1e-10);
    CHECK(std::abs(via_u.imag()) < 1e-12);
  }
  SUBCASE("kappa = 1, u = 1 is the plain resolvent mean (no Gamma factor)") {
    const cplx got = en::empirical_frac_moment(spec, z, cplx(1.0, 0.0), 1.0);
    const auto diag = en::resolvent_diag(spec, z);
    cplx mean(0.0, 0.0);
    for (int k = 0; k < 300; ++k) mean += diag[k];
    mean /= 300.0;
    CHECK(std::abs(got - (-cplx(0.0, 1.0) * mean)) < 1e-12);
  }
  SUBCASE("brute-force recomputation from the eigendecomposition") {
    const cplx u = std::polar(1.0, 0.3);
    cplx acc(0.0, 0.0);
    for (int k = 0; k < 300; ++k) {
      cplx rkk(0.0, 0.0);
      for (int i = 0; i < 300; ++i) {
        const double w = spec.eigenvectors(k, i);
        rkk += w * w / (spec.eigenvalues[i] - z);
      }
      const cplx h = -cplx(0.0, 1.0) * rkk;
      acc += std::pow(u.real() * h + u.imag() * std::conj(h), kappa);
    }
    acc = acc / 300.0 * std::tgamma(1.0 - kappa);
    CHECK(std::abs(acc - en::empirical_frac_moment(spec, z, u, kappa)) < 1e-10);
    CHECK(in_cone(acc, kappa, 1e-9));
  }
  SUBCASE("u outside the first quadrant rejected") {
    CHECK_THROWS_AS(en::empirical_frac_moment(spec, z, cplx(-1.0, 0.0), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(en::empirical_frac_moment(spec, z, cplx(2.0, 0.0), 0.5),
                    std::invalid_argument);
  }
  SUBCASE("imaginary-part moment: kappa = 1 and the resolvent bound") {
    const auto diag = en::resolvent_diag(spec, z);
    cplx mean(0.0, 0.0);
    for (int k = 0; k < 300; ++k) mean += diag[k];
    mean /= 300.0;
    CHECK(en::frac_moment_imag(spec, z, 1.0) == doctest::Approx(mean.imag()).epsilon(1e-12));
    CHECK(en::frac_moment_imag(spec, z, 0.25) <= std::pow(z.imag(), -0.25));
  }
}
