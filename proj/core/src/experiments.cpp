#include "levylab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "levylab/ensemble.hpp"
#include "levylab/limitlaw.hpp"
#include "levylab/parallel.hpp"
#include "levylab/stats.hpp"

namespace levylab::experiments {

using io::json;

namespace {

json config_header(const char* command, std::uint64_t seed) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["master_seed"] = seed;
  return j;
}

}  // namespace

RhoGamma rho_of_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "rho_of_alpha: alpha must be strictly inside (0,2)");
  RhoGamma rg;
  rg.alpha = alpha;
  if (alpha >= 1.6)
    rg.rho = 0.5;
  else if (alpha > 1.0)
    rg.rho = alpha / (8.0 - 3.0 * alpha);
  else
    rg.rho = alpha / (2.0 + 3.0 * alpha);
  rg.gamma_exp = 1.0 / (0.5 + 1.0 / alpha);
  return rg;
}

json local_law_experiment(const LocalLawConfig& cfg) {
  const RhoGamma rg = rho_of_alpha(cfg.alpha);
  require(cfg.window_hi > cfg.window_lo, "local_law: empty window");
  require(cfg.window_lo > 0.0 || cfg.window_hi < 0.0,
          "local_law: window must avoid a neighborhood of 0");
  require(cfg.trials >= 1, "local_law: need at least one trial");

  json report = config_header("local-law", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha},       {"n_list", cfg.n_list},
                      {"window", {cfg.window_lo, cfg.window_hi}},
                      {"trials", cfg.trials},     {"c1", cfg.c1},
                      {"rho", rg.rho},            {"table_points", cfg.table_points}};

  const limitlaw::LimitLaw law(cfg.alpha);
  const double margin = 0.02 * (cfg.window_hi - cfg.window_lo);
  const limitlaw::DensityTable table(law, cfg.window_lo - margin, cfg.window_hi + margin,
                                     cfg.table_points);

  Rng master(cfg.seed);
  json records = json::array();
  std::vector<double> medians;
  json plot_rows = json::array();
  for (int n : cfg.n_list) {
    const double len = cfg.c1 * std::pow(n, -rg.rho) * std::pow(std::log(n), 2.0);
    if (len > cfg.window_hi - cfg.window_lo)
      throw out_of_regime_error("local_law: interval length exceeds the window; reduce c1");

    std::vector<double> ratios(static_cast<std::size_t>(cfg.trials));
    std::vector<json> recs(static_cast<std::size_t>(cfg.trials));
    parallel_for(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
      Rng pos_rng = master.derive(derive_seed(1, static_cast<std::uint64_t>(n)), t);
      const double a =
          cfg.window_lo + pos_rng.uniform() * (cfg.window_hi - cfg.window_lo - len);
      const double b = a + len;
      const auto m = ensemble::build_matrix(
          n, cfg.alpha, derive_seed(cfg.seed, static_cast<std::uint64_t>(n), t));
      const Eigen::VectorXd ev = ensemble::spectrum_values(m);
      const int count = ensemble::interval_count(ev, a, b);
      const double mu_a = static_cast<double>(count) / n;
      const double mu_alpha = table.mass(a, b);
      const double ratio = std::abs(mu_a - mu_alpha) / len;
      ratios[t] = ratio;
      recs[t] = {{"n", n},         {"trial", t},          {"seed", m.seed()},
                 {"interval", {a, b}}, {"N_I", count},    {"mu_A", mu_a},
                 {"mu_alpha", mu_alpha}, {"ratio", ratio}};
    });
    for (auto& r : recs) records.push_back(std::move(r));
    const double med = stats::median(ratios);
    medians.push_back(med);
    plot_rows.push_back({static_cast<double>(n), len, med, stats::mean(ratios)});
  }

  report["records"] = std::move(records);
  json agg;
  agg["median_ratio_by_n"] = medians;
  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i)
    if (medians[i] >= medians[i - 1]) decreasing = false;
  agg["median_ratio_decreasing"] = decreasing;
  report["aggregates"] = std::move(agg);
  report["plots"]["ratio_vs_n"] = {{"header", {"n", "interval_length", "median_ratio", "mean_ratio"}},
                                   {"rows", plot_rows}};
  return report;
}

json concentration_experiment(const ConcentrationConfig& cfg) {
  require(cfg.seeds >= 10, "concentration: need >= 10 seeds");
  json report = config_header("concentration", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha}, {"n", cfg.n},       {"seeds", cfg.seeds},
                      {"interval", {cfg.a, cfg.b}}, {"t_list", cfg.t_list}};

  std::vector<double> masses(static_cast<std::size_t>(cfg.seeds));
  parallel_for(static_cast<std::size_t>(cfg.seeds), cfg.workers, [&](std::size_t s) {
    const auto m = ensemble::build_matrix(cfg.n, cfg.alpha, derive_seed(cfg.seed, 0xc04c, s));
    const Eigen::VectorXd ev = ensemble::spectrum_values(m);
    masses[s] = static_cast<double>(ensemble::interval_count(ev, cfg.a, cfg.b)) / cfg.n;
  });
  const double mean_mass = stats::mean(masses);

  json rows = json::array();
  bool all_within = true;
  for (double t : cfg.t_list) {
    int exceed = 0;
    for (double m : masses)
      if (std::abs(m - mean_mass) >= t) ++exceed;
    const double freq = static_cast<double>(exceed) / cfg.seeds;
    const double bound = 2.0 * std::exp(-0.5 * cfg.n * t * t);
    if (freq > 2.0 * bound) all_within = false;
    rows.push_back({t, freq, bound});
  }
  report["aggregates"] = {{"mean_mass", mean_mass}, {"within_doubled_bound", all_within}};
  report["plots"]["deviation_vs_t"] = {{"header", {"t", "empirical_freq", "bound"}},
                                       {"rows", rows}};
  return report;
}

json wegner_experiment(const WegnerConfig& cfg) {
  const RhoGamma rg = rho_of_alpha(cfg.alpha);
  require(cfg.trials >= 10, "wegner: need >= 10 trials");
  const double cutoff = std::pow(cfg.n, -(cfg.alpha + 2.0) / 4.0);

  json report = config_header("wegner", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha}, {"n", cfg.n},         {"etas", cfg.etas},
                      {"E", cfg.E},         {"trials", cfg.trials}, {"gamma", rg.gamma_exp},
                      {"eta_cutoff", cutoff}};

  // One spectrum per trial, shared by every eta.
  std::vector<Eigen::VectorXd> spectra(static_cast<std::size_t>(cfg.trials));
  parallel_for(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
    const auto m = ensemble::build_matrix(cfg.n, cfg.alpha, derive_seed(cfg.seed, 0x3e9, t));
    spectra[t] = ensemble::spectrum_values(m);
  });

  json rows = json::array();
  std::vector<double> p99s;
  for (double eta : cfg.etas) {
    const bool in_regime = eta >= cutoff;
    std::vector<double> stats_vec(static_cast<std::size_t>(cfg.trials));
    for (std::size_t t = 0; t < spectra.size(); ++t) {
      const int count = ensemble::interval_count(spectra[t], cfg.E - eta, cfg.E + eta);
      stats_vec[t] = count / (cfg.n * std::pow(eta, rg.gamma_exp));
    }
    const double p50 = stats::median(stats_vec);
    const double p99 = stats::quantile(stats_vec, 0.99);
    if (in_regime) p99s.push_back(p99);
    rows.push_back({eta, p50, p99, in_regime ? 1.0 : 0.0});
  }
  json agg;
  if (!p99s.empty()) {
    const double lo = *std::min_element(p99s.begin(), p99s.end());
    const double hi = *std::max_element(p99s.begin(), p99s.end());
    agg["p99_spread_factor"] = hi / lo;
  }
  agg["out_of_regime_etas"] = [&] {
    json a = json::array();
    for (double eta : cfg.etas)
      if (eta < cutoff) a.push_back(eta);
    return a;
  }();
  report["aggregates"] = std::move(agg);
  report["plots"]["stat_vs_eta"] = {{"header", {"eta", "p50", "p99", "in_regime"}},
                                    {"rows", rows}};
  return report;
}

json delocalization_stats(const DelocConfig& cfg) {
  require(cfg.alpha > 1.0, "delocalization_stats: requires alpha > 1");
  const RhoGamma rg = rho_of_alpha(cfg.alpha);
  json report = config_header("deloc", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha},
                      {"n_list", cfg.n_list},
                      {"window", {cfg.window_lo, cfg.window_hi}},
                      {"trials", cfg.trials}};

  json records = json::array();
  std::vector<double> med_by_n;
  std::vector<double> n_used;
  json rows = json::array();
  for (int n : cfg.n_list) {
    std::vector<double> sup_norms;
    std::vector<json> recs(static_cast<std::size_t>(cfg.trials));
    std::vector<double> sups(static_cast<std::size_t>(cfg.trials), -1.0);
    parallel_for(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
      const auto m = ensemble::build_matrix(
          n, cfg.alpha, derive_seed(cfg.seed, static_cast<std::uint64_t>(n) + 0x51, t));
      const auto ws = ensemble::spectrum_window(m, cfg.window_lo, cfg.window_hi);
      json rec = {{"n", n}, {"trial", t}, {"seed", m.seed()}, {"count", ws.eigenvalues.size()}};
      if (ws.eigenvalues.size() == 0) {
        rec["skipped"] = true;
        recs[t] = std::move(rec);
        return;
      }
      double sup = 0.0, l1 = 0.0, l4 = 0.0;
      for (Eigen::Index c = 0; c < ws.eigenvectors.cols(); ++c) {
        const auto v = ws.eigenvectors.col(c);
        const double vinf = v.cwiseAbs().maxCoeff();
        if (vinf > sup) {
          sup = vinf;
          l1 = v.cwiseAbs().sum();
          l4 = std::pow(v.array().abs().pow(4.0).sum(), 0.25);
        }
      }
      sups[t] = sup;
      rec["sup_norm"] = sup;
      rec["l1_of_max_vector"] = l1;
      rec["l4_of_max_vector"] = l4;
      recs[t] = std::move(rec);
    });
    for (double s : sups)
      if (s >= 0.0) sup_norms.push_back(s);
    for (auto& r : recs) records.push_back(std::move(r));
    if (sup_norms.empty()) continue;
    const double med = stats::median(sup_norms);
    med_by_n.push_back(med);
    n_used.push_back(n);
    rows.push_back({static_cast<double>(n), med, stats::mean(sup_norms)});
  }

  report["records"] = std::move(records);
  json agg;
  agg["median_supnorm_by_n"] = med_by_n;
  if (n_used.size() >= 2) agg["loglog_slope"] = stats::loglog_slope(n_used, med_by_n);
  agg["predicted_exponent"] = -rg.rho * (1.0 - 1.0 / cfg.alpha);
  report["aggregates"] = std::move(agg);
  report["plots"]["supnorm_vs_n"] = {{"header", {"n", "median_supnorm", "mean_supnorm"}},
                                     {"rows", rows}};
  return report;
}

namespace {

json localization_one_window(const LocConfig& cfg, const ensemble::SpectralData& spec, double lo,
                             double hi, double kappa) {
  const int n = spec.n();
  json rec;
  rec["window"] = {lo, hi};
  std::vector<int> in_window;
  for (int i = 0; i < n; ++i)
    if (spec.eigenvalues[i] >= lo && spec.eigenvalues[i] <= hi) in_window.push_back(i);
  rec["count"] = in_window.size();
  if (in_window.empty()) {
    rec["skipped"] = true;
    return rec;
  }

  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (int idx : in_window) {
    const auto v = spec.eigenvectors.col(idx);
    for (int i = 0; i < n; ++i) w[i] += v[i] * v[i];
  }
  const double scale = static_cast<double>(n) / static_cast<double>(in_window.size());
  for (double& x : w) x *= scale;

  double mean_w = 0.0, frac = 0.0, frac_kappa = 0.0;
  for (double x : w) {
    mean_w += x;
    frac += std::pow(x, cfg.alpha / 2.0);
    frac_kappa += std::pow(x, kappa);
  }
  mean_w /= n;
  frac /= n;
  frac_kappa /= n;

  const double threshold = std::pow(frac_kappa / cfg.mass_delta, -1.0 / (1.0 - kappa));
  int j_size = 0;
  double j_mass = 0.0;
  for (double x : w)
    if (x >= threshold) {
      ++j_size;
      j_mass += x;
    }
  rec["mean_W"] = mean_w;
  rec["frac_moment_half_alpha"] = frac;
  rec["frac_moment_kappa"] = frac_kappa;
  rec["support_threshold"] = threshold;
  rec["support_size"] = j_size;
  rec["support_mass_fraction"] = j_mass / n;
  return rec;
}

}  // namespace

json localization_stats(const LocConfig& cfg) {
  require(cfg.alpha > 0.0 && cfg.alpha < 2.0 / 3.0,
          "localization_stats: requires alpha in (0, 2/3)");
  const double kappa = cfg.kappa > 0.0 ? cfg.kappa : 0.8 * cfg.alpha / 2.0;
  require(kappa > 0.0 && kappa < cfg.alpha / 2.0 + 1e-12,
          "localization_stats: kappa must be in (0, alpha/2)");
  const RhoGamma rg = rho_of_alpha(cfg.alpha);
  const double theorem_scale =
      std::pow(cfg.n, -rg.rho) * std::pow(std::log(cfg.n), 2.0);

  json report = config_header("loc", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha},
                      {"n", cfg.n},
                      {"window", {cfg.window_lo, cfg.window_hi}},
                      {"bulk_window", {cfg.bulk_lo, cfg.bulk_hi}},
                      {"kappa", kappa},
                      {"mass_delta", cfg.mass_delta},
                      {"seeds", cfg.seeds},
                      {"theorem_min_length", theorem_scale}};
  report["below_theorem_scale"] = (cfg.window_hi - cfg.window_lo) < theorem_scale;

  json records = json::array();
  std::vector<json> recs(static_cast<std::size_t>(cfg.seeds));
  parallel_for(static_cast<std::size_t>(cfg.seeds), cfg.workers, [&](std::size_t s) {
    const auto m = ensemble::build_matrix(cfg.n, cfg.alpha, derive_seed(cfg.seed, 0x10c, s));
    const auto spec = ensemble::spectrum(m);
    json rec = {{"seed", m.seed()}};
    rec["large_E"] = localization_one_window(cfg, spec, cfg.window_lo, cfg.window_hi, kappa);
    rec["bulk"] = localization_one_window(cfg, spec, cfg.bulk_lo, cfg.bulk_hi, kappa);
    recs[s] = std::move(rec);
  });

  std::vector<double> frac_large, frac_bulk, support_frac;
  for (auto& r : recs) {
    if (!r["large_E"].contains("skipped") && !r["bulk"].contains("skipped")) {
      frac_large.push_back(r["large_E"]["frac_moment_half_alpha"].get<double>());
      frac_bulk.push_back(r["bulk"]["frac_moment_half_alpha"].get<double>());
      support_frac.push_back(r["large_E"]["support_size"].get<double>() / cfg.n);
    }
    records.push_back(std::move(r));
  }
  report["records"] = std::move(records);

  json agg;
  if (!frac_large.empty()) {
    agg["mean_frac_moment_large_E"] = stats::mean(frac_large);
    agg["mean_frac_moment_bulk"] = stats::mean(frac_bulk);
    agg["contrast_ratio"] = stats::mean(frac_large) / stats::mean(frac_bulk);
    agg["mean_support_fraction_large_E"] = stats::mean(support_frac);
    agg["usable_seeds"] = frac_large.size();
  }
  report["aggregates"] = std::move(agg);
  return report;
}

json frac_moment_vanishing_experiment(const FracVanishConfig& cfg) {
  require(cfg.alpha > 0.0 && cfg.alpha < 2.0 / 3.0,
          "frac_moment_vanishing: requires alpha in (0, 2/3)");
  json report = config_header("frac-moment", cfg.seed);
  report["config"] = {{"alpha", cfg.alpha}, {"n_list", cfg.n_list}, {"E", cfg.E},
                      {"bulk_E", cfg.bulk_E}, {"trials", cfg.trials}};

  json rows = json::array();
  std::vector<double> means_large, means_bulk, ns;
  double se_large_at_max = 0.0;
  for (int n : cfg.n_list) {
    const double eta = std::pow(n, -1.0 / 6.0);
    std::vector<double> large(static_cast<std::size_t>(cfg.trials));
    std::vector<double> bulk(static_cast<std::size_t>(cfg.trials));
    parallel_for(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
      const auto m = ensemble::build_matrix(
          n, cfg.alpha, derive_seed(cfg.seed, static_cast<std::uint64_t>(n) + 0xf, t));
      const auto spec = ensemble::spectrum(m);
      large[t] = ensemble::frac_moment_imag(spec, cplx(cfg.E, eta), cfg.alpha / 2.0);
      bulk[t] = ensemble::frac_moment_imag(spec, cplx(cfg.bulk_E, eta), cfg.alpha / 2.0);
    });
    means_large.push_back(stats::mean(large));
    means_bulk.push_back(stats::mean(bulk));
    ns.push_back(n);
    if (n == cfg.n_list.back()) se_large_at_max = stats::std_error(large);
    rows.push_back({static_cast<double>(n), eta, means_large.back(), stats::std_error(large),
                    means_bulk.back(), stats::std_error(bulk)});
  }

  json agg;
  agg["mean_large_by_n"] = means_large;
  agg["mean_bulk_by_n"] = means_bulk;
  bool decreasing = true;
  for (std::size_t i = 1; i < means_large.size(); ++i)
    if (means_large[i] >= means_large[i - 1]) decreasing = false;
  agg["large_E_decreasing_in_n"] = decreasing;
  agg["contrast_ratio_at_max_n"] = means_large.back() / means_bulk.back();
  agg["resolvent_bound"] = std::pow(std::pow(cfg.n_list.back(), -1.0 / 6.0), -cfg.alpha / 2.0);

  if (cfg.compare_rde) {
    const int n_max = cfg.n_list.back();
    const double eta = std::pow(n_max, -1.0 / 6.0);
    Rng rng(derive_seed(cfg.seed, 0xde, 0));
    rde::PoolRunDiagnostics diag;
    const auto pool = rde::run_population_dynamics(cfg.alpha, cplx(cfg.E, eta), cfg.pool, rng, &diag);
    double mi = 0.0;
    for (const cplx& r : pool.samples) mi += std::pow(std::max(r.imag(), 0.0), cfg.alpha / 2.0);
    mi /= static_cast<double>(pool.samples.size());
    agg["rde_pool_value"] = mi;
    agg["rde_matrix_gap"] = std::abs(mi - means_large.back());
    agg["matrix_se_at_max_n"] = se_large_at_max;
  }
  report["aggregates"] = std::move(agg);
  report["plots"]["frac_moment_vs_n"] = {
      {"header", {"n", "eta", "mean_large_E", "se_large_E", "mean_bulk", "se_bulk"}},
      {"rows", rows}};
  return report;
}

json gaussian_projection_check(const GaussProjConfig& cfg) {
  require(cfg.p > 0.0 && cfg.p <= 2.0, "gaussian_projection_check: p must be in (0,2]");
  require(cfg.trials >= 100, "gaussian_projection_check: need >= 100 trials");
  json report = config_header("gauss-proj", cfg.seed);
  report["config"] = {{"n", cfg.n}, {"d_list", cfg.d_list}, {"p", cfg.p},
                      {"delta", cfg.delta}, {"trials", cfg.trials}};

  json rows = json::array();
  std::vector<double> freqs;
  for (int d : cfg.d_list) {
    require(d >= 1 && d <= cfg.n, "gaussian_projection_check: need 1 <= d <= n");
    std::vector<char> fail(static_cast<std::size_t>(cfg.trials), 0);
    parallel_for(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(d) + 0x99, t));
      Eigen::VectorXd pg(cfg.n);
      if (d == cfg.n) {
        for (int i = 0; i < cfg.n; ++i) pg[i] = rng.normal();
      } else {
        Eigen::MatrixXd gmat(cfg.n, d);
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < cfg.n; ++i) gmat(i, j) = rng.normal();
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gmat)
                                      .householderQ() *
                                  Eigen::MatrixXd::Identity(cfg.n, d);
        Eigen::VectorXd g(cfg.n);
        for (int i = 0; i < cfg.n; ++i) g[i] = rng.normal();
        pg = q * (q.transpose() * g);
      }
      const double norm_p = std::pow(pg.array().abs().pow(cfg.p).sum(), 1.0 / cfg.p);
      const double target = cfg.delta * std::pow(static_cast<double>(d), 1.0 / cfg.p);
      fail[t] = norm_p < target ? 1 : 0;
    });
    int failures = 0;
    for (char f : fail) failures += f;
    const double freq = static_cast<double>(failures) / cfg.trials;
    freqs.push_back(freq);
    rows.push_back({static_cast<double>(d), freq});
  }

  json agg;
  agg["failure_freq_by_d"] = freqs;
  bool monotone = true;
  for (std::size_t i = 1; i < freqs.size(); ++i)
    if (freqs[i] > freqs[i - 1] + 1e-12) monotone = false;
  agg["failure_freq_nonincreasing_in_d"] = monotone;
  report["aggregates"] = std::move(agg);
  report["plots"]["failure_vs_d"] = {{"header", {"d", "failure_freq"}}, {"rows", rows}};
  return report;
}

}  // namespace levylab::experiments
