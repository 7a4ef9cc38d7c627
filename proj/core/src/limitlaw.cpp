#include "levylab/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "levylab/stats.hpp"

namespace levylab::limitlaw {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

cplx clamp_to_cone(cplx v, double beta) {
  if (v == cplx(0.0, 0.0)) return v;
  const double bound = 0.5 * kPi * beta;
  const double a = std::arg(v);
  if (std::abs(a) <= bound) return v;
  return std::polar(std::abs(v), a > 0.0 ? bound : -bound);
}

}  // namespace

ConeValue::ConeValue(cplx v, double beta, double slack) : value(v), cone_index(beta) {
  if (!in_cone(v, beta, slack))
    throw numerical_error("ConeValue: value outside K_beta");
}

LimitLaw::LimitLaw(double alpha, SolveOptions opt)
    : alpha_(alpha),
      gamma_factor_(std::tgamma(1.0 - alpha / 2.0)),
      inv_gamma_half_(1.0 / std::tgamma(alpha / 2.0)),
      opt_(opt),
      e0_(0.0) {
  require(alpha > 0.0 && alpha < 2.0, "LimitLaw: alpha must be in (0,2)");

  // Detect the contraction threshold of the iteration map on the ray z = i t.
  for (double t : {0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0}) {
    const cplx z(0.0, t);
    cplx ya = 2.0 * std::pow(-cplx(0.0, 1.0) * z, -alpha_ / 2.0);
    cplx yb = 0.5 * ya * std::polar(1.0, kPi * alpha_ / 8.0);
    bool contracts = true;
    double prev_a = -1.0, prev_b = -1.0;
    for (int k = 0; k < 20 && contracts; ++k) {
      const cplx na = clamp_to_cone(2.0 * phi(z, ya), alpha_ / 2.0);
      const cplx nb = clamp_to_cone(2.0 * phi(z, yb), alpha_ / 2.0);
      const double da = std::abs(na - ya), db = std::abs(nb - yb);
      if (k >= 10) {
        if (prev_a > 0.0 && da > 0.9 * prev_a && da > 1e-14) contracts = false;
        if (prev_b > 0.0 && db > 0.9 * prev_b && db > 1e-14) contracts = false;
      }
      prev_a = da;
      prev_b = db;
      ya = na;
      yb = nb;
    }
    if (contracts && std::abs(ya - yb) < 1e-6 * (1.0 + std::abs(ya))) {
      e0_ = t;
      break;
    }
  }
  if (e0_ == 0.0) throw numerical_error("LimitLaw: no contraction threshold found on test ray");
}

cplx LimitLaw::phi(cplx z, cplx x) const {
  return inv_gamma_half_ *
         quad::stable_exp_kernel(alpha_ / 2.0, alpha_ / 2.0, -cplx(0.0, 1.0) * z,
                                 gamma_factor_ * x, opt_.quad);
}

cplx LimitLaw::psi(cplx z, cplx x) const {
  return quad::stable_exp_kernel(1.0, alpha_ / 2.0, -cplx(0.0, 1.0) * z, gamma_factor_ * x,
                                 opt_.quad);
}

cplx LimitLaw::phi_prime(cplx z, cplx x) const {
  return -gamma_factor_ * inv_gamma_half_ *
         quad::stable_exp_kernel(alpha_, alpha_ / 2.0, -cplx(0.0, 1.0) * z, gamma_factor_ * x,
                                 opt_.quad);
}

LimitLaw::Refined LimitLaw::refine(cplx z, cplx y0, int picard_budget, int newton_budget) const {
  const double beta = alpha_ / 2.0;
  // magnitudes far beyond the free-case start mean the iteration left the
  // basin; bail so the caller can restart instead of feeding the quadrature
  // runaway arguments
  const double y_cap = 1e3 * (1.0 + 2.0 * std::pow(std::abs(z), -beta));
  Refined out;
  out.y = y0;
  out.residual = std::numeric_limits<double>::infinity();
  out.iterations = 0;
  out.ok = false;

  try {
    auto map = [&](cplx y) { return 2.0 * phi(z, y); };
    auto sane = [&](cplx y) { return std::isfinite(y.real()) && std::isfinite(y.imag()) &&
                                     std::abs(y) < y_cap; };
    cplx y = clamp_to_cone(y0, beta);
    if (!sane(y)) return out;
    double resid = std::abs(y - map(y));
    int iters = 0;

    for (int k = 0; k < picard_budget && resid > opt_.tol; ++k, ++iters) {
      const cplx fy = map(y);
      const double r = std::abs(y - fy);
      y = clamp_to_cone(fy, beta);
      if (!sane(y)) return out;
      resid = std::abs(y - map(y));
      if (resid < opt_.tol) break;
      if (r > 0.0 && resid > 0.995 * r && k >= 4) break;  // stalls: hand to Newton
    }

    for (int k = 0; k < newton_budget && resid > opt_.tol; ++k, ++iters) {
      const cplx fy = map(y);
      const cplx fp = 2.0 * phi_prime(z, y);
      const cplx denom = 1.0 - fp;
      if (std::abs(denom) < 1e-12) break;
      cplx step = (y - fy) / denom;
      // backtracking line search on the residual
      double lambda = 1.0;
      bool improved = false;
      for (int bt = 0; bt < 6; ++bt, lambda *= 0.5) {
        const cplx cand = clamp_to_cone(y - lambda * step, beta);
        if (!sane(cand)) continue;
        const double r2 = std::abs(cand - map(cand));
        if (r2 < resid) {
          y = cand;
          resid = r2;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }

    out.y = y;
    out.residual = resid;
    out.iterations = iters;
    out.ok = resid <= opt_.tol * 10.0;  // report-level success; invariant checked by caller
  } catch (const numerical_error&) {
    // quadrature failure from a runaway iterate: report the level as failed
  }
  return out;
}

LimitPoint LimitLaw::solve(cplx z) const {
  require(z.imag() > 0.0, "LimitLaw::solve: Im z must be > 0");
  const double beta = alpha_ / 2.0;
  const double target_eta = z.imag();
  const double e_top = e0_ + 1.0;

  LimitPoint out;
  out.z = z;

  auto finish = [&](cplx y, double resid, int levels, bool flagged) {
    out.y = ConeValue(y, beta, 1e-9);
    out.g = cplx(0.0, 1.0) * psi(z, y);
    out.residual = resid;
    out.path_length = levels;
    out.suspected_exceptional = flagged;
    return out;
  };

  if (target_eta >= e_top) {
    const cplx y0 = 2.0 * std::pow(-cplx(0.0, 1.0) * z, -beta);
    Refined r = refine(z, y0, 100, 40);
    if (r.residual > opt_.tol * 10.0)
      throw numerical_error("LimitLaw::solve: no convergence in the contraction regime");
    return finish(r.y, r.residual, 1, false);
  }

  // Continuation downward in eta from the contraction regime. Steps follow
  // tau' * min(1,eta)^2 while that is the larger move, then switch to a
  // geometric reduction; failed levels halve the step.
  double tau = opt_.tau_prime;
  double geo = opt_.geometric_step;
  const cplx z_top(z.real(), e_top);
  Refined cur = refine(z_top, 2.0 * std::pow(-cplx(0.0, 1.0) * z_top, -beta), 100, 40);
  if (cur.residual > opt_.tol * 10.0)
    throw numerical_error("LimitLaw::solve: top-of-ladder solve failed");

  double eta = e_top;
  int levels = 1;
  int total_iters = cur.iterations;
  int consecutive_failures = 0;
  while (eta > target_eta) {
    const double step = std::max(tau * std::min(1.0, eta) * std::min(1.0, eta), (1.0 - geo) * eta);
    const double eta_next = std::max(target_eta, eta - step);
    const cplx z_next(z.real(), eta_next);
    Refined r = refine(z_next, cur.y, 30, 30);
    total_iters += r.iterations;
    if (total_iters > opt_.max_total_iterations)
      throw numerical_error("LimitLaw::solve: iteration budget exhausted (residual " +
                            std::to_string(r.residual) + ")");
    if (r.residual <= opt_.tol * 10.0) {
      cur = r;
      eta = eta_next;
      ++levels;
      consecutive_failures = 0;
      continue;
    }
    tau *= 0.5;
    geo = 0.5 * (1.0 + geo);
    if (++consecutive_failures >= 12) {
      if (opt_.allow_flagged && target_eta < 0.05) {
        Refined last = refine(cplx(z.real(), target_eta), cur.y, 50, 50);
        return finish(last.y, last.residual, levels, true);
      }
      throw numerical_error("LimitLaw::solve: continuation failed near E = " +
                            std::to_string(z.real()));
    }
  }

  // final polish at the exact target
  Refined fin = refine(z, cur.y, 30, 30);
  if (fin.residual > opt_.tol * 10.0) {
    if (opt_.allow_flagged) return finish(fin.y, fin.residual, levels, true);
    throw numerical_error("LimitLaw::solve: residual above tolerance at target");
  }
  return finish(fin.y, fin.residual, levels, false);
}

LimitPoint LimitLaw::solve_from(cplx z, cplx y_start) const {
  require(z.imag() > 0.0, "LimitLaw::solve_from: Im z must be > 0");
  Refined r = refine(z, y_start, 20, 30);
  if (r.residual > opt_.tol * 10.0) return solve(z);
  LimitPoint out;
  out.z = z;
  out.y = ConeValue(r.y, alpha_ / 2.0, 1e-9);
  out.g = cplx(0.0, 1.0) * psi(z, r.y);
  out.residual = r.residual;
  out.path_length = 1;
  return out;
}

DensityEstimate LimitLaw::density(double E, const std::vector<double>& etas) const {
  require(!etas.empty(), "density: eta sequence must be nonempty");
  for (std::size_t i = 1; i < etas.size(); ++i)
    require(etas[i] < etas[i - 1], "density: eta sequence must be decreasing");
  require(etas.back() >= 1e-4, "density: smallest eta must be >= 1e-4");

  DensityEstimate est;
  est.etas = etas;
  LimitPoint p = solve(cplx(E, etas.front()));
  est.suspected_exceptional = p.suspected_exceptional;
  est.f_eta.push_back(p.g.imag() / kPi);
  est.residuals.push_back(p.residual);
  for (std::size_t i = 1; i < etas.size(); ++i) {
    p = solve_from(cplx(E, etas[i]), p.y.value);
    est.suspected_exceptional = est.suspected_exceptional || p.suspected_exceptional;
    est.f_eta.push_back(p.g.imag() / kPi);
    est.residuals.push_back(p.residual);
  }

  const std::size_t m = est.f_eta.size();
  const std::size_t k = std::min<std::size_t>(3, m);
  std::vector<double> xs(est.etas.end() - k, est.etas.end());
  std::vector<double> ys(est.f_eta.end() - k, est.f_eta.end());
  est.value = (k >= 2) ? stats::linear_fit(xs, ys).intercept : ys.back();
  if (est.value < 0.0 && est.value > -1e-8) est.value = 0.0;

  for (std::size_t i = 2; i < m; ++i) {
    const double d1 = est.f_eta[i - 1] - est.f_eta[i - 2];
    const double d2 = est.f_eta[i] - est.f_eta[i - 1];
    if (d1 * d2 < 0.0) est.monotone = false;
  }
  return est;
}

MassEstimate LimitLaw::interval_mass(double a, double b, double eta) const {
  require(b >= a, "interval_mass: need a <= b");
  require(b - a >= eta, "interval_mass: interval must be at least eta wide");

  // Warm-started Stieltjes evaluations: reuse the previous solution only when
  // the evaluation point is nearby (adaptive refinement jumps around).
  struct Cache {
    bool has = false;
    double E = 0.0;
    cplx y;
  };
  Cache cache;
  double sup_im = 0.0;
  auto im_g = [&](double E) -> cplx {
    const bool warm = cache.has && std::abs(E - cache.E) < 0.25;
    LimitPoint p = warm ? solve_from(cplx(E, eta), cache.y) : solve(cplx(E, eta));
    cache.has = true;
    cache.E = E;
    cache.y = p.y.value;
    sup_im = std::max(sup_im, p.g.imag());
    return cplx(p.g.imag(), 0.0);
  };

  quad::Options qopt;
  qopt.rel_tol = 1e-8;
  qopt.abs_tol = 1e-10;
  const cplx integral = quad::integrate_or_throw(im_g, a, b, qopt, "interval_mass");

  MassEstimate est;
  est.value = integral.real() / kPi;
  est.stieltjes_sup = sup_im;
  est.error_bound = sup_im * eta * std::log(1.0 + (b - a) / eta);
  return est;
}

DensityTable::DensityTable(const LimitLaw& law, double emin, double emax, int points,
                           std::vector<double> etas)
    : emin_(emin), emax_(emax) {
  require(points >= 2, "DensityTable: need >= 2 points");
  require(emax > emin, "DensityTable: emax must exceed emin");
  for (std::size_t i = 1; i < etas.size(); ++i)
    require(etas[i] < etas[i - 1], "DensityTable: eta list must be decreasing");
  step_ = (emax - emin) / static_cast<double>(points - 1);

  // One sweep per eta, each warm-started from the previous grid point.
  std::vector<std::vector<double>> f(etas.size(), std::vector<double>(points));
  for (std::size_t j = 0; j < etas.size(); ++j) {
    cplx y{};
    bool has = false;
    for (int i = 0; i < points; ++i) {
      const cplx z(emin + step_ * i, etas[j]);
      LimitPoint p = has ? law.solve_from(z, y) : law.solve(z);
      y = p.y.value;
      has = true;
      f[j][i] = p.g.imag() / kPi;
    }
  }

  values_.resize(points);
  const std::size_t k = std::min<std::size_t>(3, etas.size());
  std::vector<double> xs(etas.end() - k, etas.end());
  std::vector<double> ys(k);
  for (int i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < k; ++j) ys[j] = f[etas.size() - k + j][i];
    values_[i] = (k >= 2) ? stats::linear_fit(xs, ys).intercept : ys.back();
    values_[i] = std::max(values_[i], 0.0);
  }
}

double DensityTable::density_at(double E) const {
  require(E >= emin_ && E <= emax_, "DensityTable: point outside the tabulated window");
  const double pos = (E - emin_) / step_;
  const std::size_t lo = std::min<std::size_t>(static_cast<std::size_t>(pos), values_.size() - 2);
  const double frac = pos - static_cast<double>(lo);
  return values_[lo] * (1.0 - frac) + values_[lo + 1] * frac;
}

double DensityTable::mass(double a, double b) const {
  require(a <= b, "DensityTable::mass: need a <= b");
  require(a >= emin_ && b <= emax_, "DensityTable::mass: interval outside the tabulated window");
  // exact integral of the piecewise-linear interpolant
  const auto cell = [&](double E) { return (E - emin_) / step_; };
  const double pa = cell(a), pb = cell(b);
  const std::size_t ia = static_cast<std::size_t>(pa);
  const std::size_t ib = std::min<std::size_t>(static_cast<std::size_t>(pb), values_.size() - 2);
  auto trapz = [&](std::size_t i, double t0, double t1) {
    const double f0 = values_[i] * (1.0 - t0) + values_[i + 1] * t0;
    const double f1 = values_[i] * (1.0 - t1) + values_[i + 1] * t1;
    return 0.5 * (f0 + f1) * (t1 - t0) * step_;
  };
  if (ia == ib) return trapz(ia, pa - ia, pb - ib);
  double total = trapz(ia, pa - ia, 1.0);
  for (std::size_t i = ia + 1; i < ib; ++i) total += 0.5 * (values_[i] + values_[i + 1]) * step_;
  total += trapz(ib, 0.0, pb - ib);
  return total;
}

}  // namespace levylab::limitlaw
