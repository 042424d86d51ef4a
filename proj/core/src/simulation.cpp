#include "dnbcure/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "dnbcure/errors.hpp"
#include "dnbcure/model.hpp"

namespace dnbcure {

void SimSetting::validate() const {
  if (n < 1) throw ConfigError("SimSetting: n must be >= 1");
  if (!(phi_true > 0 && gamma1_true > 0 && gamma2_true > 0))
    throw ConfigError("SimSetting: phi and gamma truths must be positive");
  if (!(p_low > 0 && p_high < 1 && p_low < p_high))
    throw ConfigError("SimSetting: need 0 < p_low < p_high < 1");
  if (!(ulcer_prob >= 0 && ulcer_prob <= 1))
    throw ConfigError("SimSetting: ulcer_prob must lie in [0,1]");
  if (!(thick_ulcer_mean > 0 && thick_ulcer_var > 0 && thick_noulcer_mean > 0))
    throw ConfigError("SimSetting: thickness moments must be positive");
  if (!(censor_rate > 0))
    throw ConfigError("SimSetting: censor_rate must be positive");
}

std::pair<double, double> solve_weibull_moments(double mean, double variance) {
  if (!(mean > 0) || !(variance > 0))
    throw ConfigError("solve_weibull_moments: moments must be positive");
  // cv^2 = Gamma(1+2/k)/Gamma(1+1/k)^2 - 1 is strictly decreasing in k;
  // bisect on k, then read the scale off the mean equation.
  const double target = variance / (mean * mean);
  auto cv2 = [](double k) {
    return std::exp(std::lgamma(1.0 + 2.0 / k) -
                    2.0 * std::lgamma(1.0 + 1.0 / k)) -
           1.0;
  };
  double lo = 0.1, hi = 50.0;
  if (!(cv2(lo) > target && cv2(hi) < target))
    throw ConfigError("solve_weibull_moments: moments unreachable for k in [0.1, 50]");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cv2(mid) > target ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  const double scale = mean / std::exp(std::lgamma(1.0 + 1.0 / k));
  return {k, scale};
}

std::pair<double, double> solve_p_regression(double x_min, double x_max,
                                             double p_low, double p_high) {
  if (!(x_min < x_max))
    throw ConfigError("solve_p_regression: degenerate covariate range");
  if (!(p_low > 0 && p_low < 1 && p_high > 0 && p_high < 1 && p_low <= p_high))
    throw ConfigError("solve_p_regression: probabilities must lie in (0,1)");
  auto logit = [](double p) { return std::log(p / (1.0 - p)); };
  const double beta1 = (logit(p_high) - logit(p_low)) / (x_max - x_min);
  const double beta0 = logit(p_low) - beta1 * x_min;
  return {beta0, beta1};
}

std::vector<Covariates> gen_covariates(const SimSetting& setting,
                                       SplitMix64& rng) {
  setting.validate();
  const auto [shape, scale] =
      solve_weibull_moments(setting.thick_ulcer_mean, setting.thick_ulcer_var);
  std::vector<Covariates> out;
  out.reserve(setting.n);
  for (int i = 0; i < setting.n; ++i) {
    Covariates c;
    c.ulcer = rng::bernoulli(rng, setting.ulcer_prob);
    c.thickness = c.ulcer
                      ? rng::weibull(rng, shape, scale)
                      : rng::exponential(rng, 1.0 / setting.thick_noulcer_mean);
    out.push_back(c);
  }
  return out;
}

LatentDraw gen_subject(int ulcer, double thickness, const ParamVector& truths,
                       double censor_rate, SplitMix64& rng) {
  if (!is_feasible(truths))
    throw DomainError("gen_subject: infeasible truth vector");
  if (truths.q1() != 2 || truths.q2() != 1)
    throw UsageError("gen_subject: truths must have q1=2 (intercept, thickness) and q2=1 (ulcer)");

  Eigen::Vector2d x_p(1.0, thickness);
  Eigen::VectorXd x_eta(1);
  x_eta << static_cast<double>(ulcer);
  const double p = logistic_link(x_p, truths.beta1());
  const double eta = loglinear_link(x_eta, truths.beta2());

  LatentDraw draw;
  draw.initial_risks = rng::negative_binomial(rng, eta, truths.phi());
  draw.active_risks =
      draw.initial_risks > 0 ? rng::binomial(rng, draw.initial_risks, p) : 0;
  draw.censoring_time = rng::exponential(rng, censor_rate);
  if (draw.active_risks == 0) {
    draw.y = draw.censoring_time;
    draw.delta = 0;
    return draw;
  }
  // Eq.-style Weibull: F(y) = 1 - exp(-(gamma2 y)^(1/gamma1)), i.e. standard
  // shape 1/gamma1 and scale 1/gamma2.
  draw.progression_times.reserve(draw.active_risks);
  double w_min = std::numeric_limits<double>::infinity();
  for (long j = 0; j < draw.active_risks; ++j) {
    const double w =
        rng::weibull(rng, 1.0 / truths.gamma1(), 1.0 / truths.gamma2());
    draw.progression_times.push_back(w);
    w_min = std::min(w_min, w);
  }
  draw.y = std::min(w_min, draw.censoring_time);
  draw.delta = draw.y < draw.censoring_time ? 1 : 0;
  return draw;
}

GeneratedData gen_dataset(const SimSetting& setting, SplitMix64& rng) {
  setting.validate();
  const std::vector<Covariates> cov = gen_covariates(setting, rng);
  double x_min = cov[0].thickness, x_max = cov[0].thickness;
  for (const Covariates& c : cov) {
    x_min = std::min(x_min, c.thickness);
    x_max = std::max(x_max, c.thickness);
  }
  double beta0, beta1;
  if (x_max - x_min > 1e-12) {
    std::tie(beta0, beta1) =
        solve_p_regression(x_min, x_max, setting.p_low, setting.p_high);
  } else {
    // degenerate thickness range (n = 1 or ties): flat regression at the
    // midpoint activation probability
    const double p_mid = 0.5 * (setting.p_low + setting.p_high);
    beta0 = std::log(p_mid / (1.0 - p_mid));
    beta1 = 0.0;
  }

  Eigen::Vector2d b1(beta0, beta1);
  Eigen::VectorXd b2(1);
  b2 << setting.beta2_true;
  ParamVector truths(setting.phi_true, b1, b2, setting.gamma1_true,
                     setting.gamma2_true);

  Dataset data;
  data.reserve(setting.n);
  for (const Covariates& c : cov) {
    const LatentDraw d =
        gen_subject(c.ulcer, c.thickness, truths, setting.censor_rate, rng);
    Subject s;
    s.y = d.y;
    s.delta = d.delta;
    s.x_p = Eigen::Vector2d(1.0, c.thickness);
    s.x_eta = Eigen::VectorXd(1);
    s.x_eta << static_cast<double>(c.ulcer);
    data.add(std::move(s));
  }
  return {std::move(data), std::move(truths)};
}

ParamVector initial_guess(const ParamVector& truths, SplitMix64& rng) {
  if (!is_feasible(truths))
    throw DomainError("initial_guess: infeasible truth vector");
  Eigen::VectorXd flat = truths.flat();
  for (Eigen::Index j = 0; j < flat.size(); ++j) {
    const double half_width = 0.2 * std::abs(flat[j]);
    flat[j] = rng::uniform(rng, flat[j] - half_width, flat[j] + half_width);
  }
  return project(ParamVector::from_flat(flat, truths.q1(), truths.q2()));
}

double MCReport::converged_fraction(int variant) const {
  const auto& flags = converged.at(variant);
  if (flags.empty()) return 0.0;
  double c = 0;
  for (char f : flags) c += f ? 1 : 0;
  return c / static_cast<double>(flags.size());
}

double MCReport::mean_iterations(int variant) const {
  const auto& iters = iterations.at(variant);
  if (iters.empty()) return 0.0;
  double sum = 0;
  for (int it : iters) sum += it;
  return sum / static_cast<double>(iters.size());
}

MCReport run_mc_study(const SimSetting& setting, int reps,
                      const std::vector<CgVariant>& variants,
                      const OptimizerConfig& cfg, int threads) {
  if (reps < 1) throw UsageError("run_mc_study: reps must be >= 1");
  if (variants.empty()) throw UsageError("run_mc_study: no variants given");
  setting.validate();
  cfg.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const int n_var = static_cast<int>(variants.size());

  MCReport rep;
  rep.param_names = {"phi", "beta0", "beta1", "beta2", "gamma1", "gamma2"};
  rep.variants = variants;
  rep.reps = reps;
  rep.truths.assign(reps, Eigen::VectorXd());
  rep.dataset_fingerprints.assign(reps, 0);
  rep.converged.assign(n_var, std::vector<char>(reps, 0));
  rep.iterations.assign(n_var, std::vector<int>(reps, 0));
  rep.estimates.assign(n_var, std::vector<Eigen::VectorXd>(reps));

  auto run_replicate = [&](int r) {
    SplitMix64 rng = substream(setting.seed, static_cast<std::uint64_t>(r));
    GeneratedData gen = gen_dataset(setting, rng);
    const ParamVector guess = initial_guess(gen.truths, rng);
    rep.truths[r] = gen.truths.flat();
    rep.dataset_fingerprints[r] = gen.data.fingerprint();
    for (int v = 0; v < n_var; ++v) {
      OptimizerConfig vcfg = cfg;
      vcfg.variant = variants[v];
      const FitResult fr = fit(gen.data, guess, vcfg);
      rep.converged[v][r] = fr.converged ? 1 : 0;
      rep.iterations[v][r] = fr.iterations;
      rep.estimates[v][r] = fr.theta_hat;
    }
  };

  const int workers = std::max(1, std::min(threads, reps));
  if (workers == 1) {
    for (int r = 0; r < reps; ++r) run_replicate(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1))
          run_replicate(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Bias/RMSE against the replicate-specific truths; non-converged fits are
  // kept in the averages (convergence is reported separately).
  const int dim = static_cast<int>(rep.truths[0].size());
  rep.bias.assign(n_var, Eigen::VectorXd::Zero(dim));
  rep.rmse.assign(n_var, Eigen::VectorXd::Zero(dim));
  for (int v = 0; v < n_var; ++v) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(dim);
    for (int r = 0; r < reps; ++r) {
      const Eigen::VectorXd err = rep.estimates[v][r] - rep.truths[r];
      sum += err;
      sumsq += err.cwiseProduct(err);
    }
    rep.bias[v] = sum / reps;
    rep.rmse[v] = (sumsq / reps).cwiseSqrt();
  }

  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace dnbcure
