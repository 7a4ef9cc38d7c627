#include "levylab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace levylab::quad {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (positive half; symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
};

Panel evaluate_panel(const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  cplx fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  cplx kronrod{0.0, 0.0}, gauss{0.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    const cplx pair = (i == 7) ? fv[7] : fv[i] + fv[14 - i];
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = h * kronrod;
  p.error = std::abs(h * (kronrod - gauss));
  return p;
}

}  // namespace

Result integrate(const std::function<cplx(double)>& f, double a, double b, const Options& opt) {
  Result res;
  if (a == b) return res;

  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
  queue.push(evaluate_panel(f, a, b));
  res.evals = 15;

  cplx total = queue.top().value;
  double err = queue.top().error;
  int panels = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) && panels < opt.max_panels) {
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
      queue.push(worst);
      break;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    res.evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  res.value = total;
  res.error = err;
  res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return res;
}

cplx integrate_or_throw(const std::function<cplx(double)>& f, double a, double b,
                        const Options& opt, const char* what) {
  Result r = integrate(f, a, b, opt);
  if (!r.converged)
    throw numerical_error(std::string(what) + ": quadrature error estimate " +
                          std::to_string(r.error) + " above tolerance");
  return r.value;
}

cplx stable_exp_kernel(double gamma, double s, cplx h, cplx x, const Options& opt) {
  require(gamma > 0.0, "stable_exp_kernel: gamma must be > 0");
  require(s > 0.0 && s < 1.0, "stable_exp_kernel: s must be in (0,1)");
  const double habs = std::abs(h);
  require(std::isfinite(h.real()) && std::isfinite(h.imag()) && std::isfinite(x.real()) &&
              std::isfinite(x.imag()),
          "stable_exp_kernel: non-finite argument");
  require(habs > 0.0, "stable_exp_kernel: h must be nonzero");
  require(in_cone(h, 1.0, 1e-9), "stable_exp_kernel: h outside the closed right half plane");

  // Rotate r -> e^{i theta} tau with theta = -arg(h): the h-factor becomes
  // exp(-tau |h|). Valid since Re(e^{i t} h) >= 0 for every t on the sweep and
  // the x-factor grows at most subexponentially.
  const double theta = -std::arg(h);
  const cplx xr = x * std::polar(1.0, theta * s);
  const cplx front = std::polar(1.0, gamma * theta);
  const double xabs = std::abs(xr);
  const double xre = xr.real();

  // Truncation point where the real exponent tau |h| - Re(x) tau^s reaches
  // `level`. When Re(x) >= 0 both factors decay and the crossing is found by
  // bisection; otherwise the subexponential growth is absorbed iteratively.
  auto cut_at = [&](double level) -> double {
    if (xre >= 0.0) {
      double hi = level / habs;  // f(hi) >= level already
      double lo = 0.0;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * habs + xre * std::pow(mid, s) >= level ? hi : lo) = mid;
      }
      return hi;
    }
    double tail = level / habs;
    for (int i = 0; i < 80; ++i) {
      const double next = (level + xabs * std::pow(tail, s)) / habs;
      if (std::abs(next - tail) < 1e-9 * tail) return next;
      tail = next;
    }
    return tail;
  };
  const double tail = cut_at(42.0);

  Options local = opt;
  if (local.abs_tol == 0.0) {
    // floor scaled by a crude magnitude estimate: Gamma(gamma) * (decay scale)^gamma
    const double scale_est = std::tgamma(gamma) * std::pow(cut_at(1.0), gamma);
    local.abs_tol = local.rel_tol * scale_est * 1e-2;
  }

  cplx value;
  if (gamma < 1.0) {
    // r = u^{1/gamma} removes the endpoint singularity exactly.
    const double inv_gamma = 1.0 / gamma;
    const double ucap = std::pow(tail, gamma);
    auto f = [&](double u) -> cplx {
      const double r = std::pow(u, inv_gamma);
      return std::exp(-r * habs - std::pow(r, s) * xr);
    };
    value = front * (1.0 / gamma) * integrate_or_throw(f, 0.0, ucap, local, "stable_exp_kernel");
  } else {
    auto f = [&](double r) -> cplx {
      return std::pow(r, gamma - 1.0) * std::exp(-r * habs - std::pow(r, s) * xr);
    };
    value = front * integrate_or_throw(f, 0.0, tail, local, "stable_exp_kernel");
  }
  return value;
}

}  // namespace levylab::quad
