#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dnbcure/errors.hpp"
#include "dnbcure/model.hpp"
#include "dnbcure/simulation.hpp"
#include "helpers/test_support.hpp"

using namespace dnbcure;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

ParamVector table_truths(double beta0, double beta1) {
  return ParamVector(0.5, vec({beta0, beta1}), vec({std::log(3.0)}), 0.215,
                     0.183);
}
}  // namespace

TEST_CASE("weibull moment matching round-trips the melanoma moments") {
  const auto [k, lambda] = solve_weibull_moments(4.34, 10.37);
  const double mean = lambda * std::exp(std::lgamma(1.0 + 1.0 / k));
  const double var = lambda * lambda *
                         (std::exp(std::lgamma(1.0 + 2.0 / k)) -
                          std::exp(2.0 * std::lgamma(1.0 + 1.0 / k)));
  CHECK(std::abs(mean - 4.34) < 1e-8);
  CHECK(std::abs(var - 10.37) < 1e-8);
  CHECK_THROWS_AS(solve_weibull_moments(1.0, 1e6), ConfigError);
  CHECK_THROWS_AS(solve_weibull_moments(-1.0, 1.0), ConfigError);
}

TEST_CASE("activation-probability regression truths in closed form") {
  const auto [b0, b1] = solve_p_regression(0.0, 10.0, 0.3, 0.9);
  CHECK(b1 == doctest::Approx(0.30445).epsilon(1e-4));
  CHECK(b0 == doctest::Approx(-0.84730).epsilon(1e-4));

  const auto [c0, c1] = solve_p_regression(1.0, 2.0, 0.5, 0.5);
  CHECK(c0 == 0.0);
  CHECK(c1 == 0.0);

  // defining equations hold at both anchors
  const auto [d0, d1] = solve_p_regression(0.37, 14.2, 0.3, 0.9);
  CHECK(logistic_link(vec({1.0, 0.37}), vec({d0, d1})) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(logistic_link(vec({1.0, 14.2}), vec({d0, d1})) ==
        doctest::Approx(0.9).epsilon(1e-12));

  CHECK_THROWS_AS(solve_p_regression(2.0, 2.0, 0.3, 0.9), ConfigError);
  CHECK_THROWS_AS(solve_p_regression(0.0, 1.0, 0.0, 0.9), ConfigError);
}

TEST_CASE("generated covariates reproduce the study moments" *
          doctest::timeout(60)) {
  SimSetting setting;
  setting.n = 100000;
  SplitMix64 rng = substream(setting.seed, 0);
  const auto cov = gen_covariates(setting, rng);

  std::vector<double> ulc, nou;
  int n_ulcer = 0;
  for (const auto& c : cov) {
    if (c.ulcer) {
      ++n_ulcer;
      ulc.push_back(c.thickness);
    } else {
      nou.push_back(c.thickness);
    }
  }
  const double frac = static_cast<double>(n_ulcer) / cov.size();
  CHECK(std::abs(frac - 0.44) < 0.01);
  CHECK(std::abs(testsup::mean(ulc) - 4.34) < 0.05);
  CHECK(std::abs(testsup::sample_sd(ulc) - 3.22) < 0.05);
  CHECK(std::abs(testsup::mean(nou) - 1.81) < 0.05);
}

TEST_CASE("latent draws: degenerate and structural cases") {
  SplitMix64 rng(123);

  SUBCASE("eta ~ 0 forces M = 0, so Y = C censored") {
    ParamVector truths(0.5, vec({0.0, 0.0}), vec({-40.0}), 0.215, 0.183);
    for (int i = 0; i < 200; ++i) {
      const LatentDraw d = gen_subject(1, 2.0, truths, 0.15, rng);
      CHECK(d.initial_risks == 0);
      CHECK(d.active_risks == 0);
      CHECK(d.delta == 0);
      CHECK(d.y == d.censoring_time);
    }
  }

  SUBCASE("invariants over a million draws") {
    ParamVector truths = table_truths(-0.847, 0.304);
    for (int i = 0; i < 1000000; ++i) {
      const LatentDraw d = gen_subject(i & 1, 0.5 + (i % 7), truths, 0.15, rng);
      CHECK(d.active_risks <= d.initial_risks);
      CHECK((d.delta == 0 || d.delta == 1));
      if (d.delta == 0) {
        CHECK(d.y == d.censoring_time);
      } else {
        CHECK(d.y < d.censoring_time);
      }
      if (d.active_risks == 0) CHECK(d.delta == 0);
    }
  }
}

TEST_CASE("cure fraction of the generator matches the closed form" *
          doctest::timeout(60)) {
  ParamVector truths = table_truths(-0.847, 0.304);
  const int ulcer = 1;
  const double thickness = 2.0;
  const double p = logistic_link(vec({1.0, thickness}), truths.beta1());
  const double eta = loglinear_link(vec({1.0}), truths.beta2());
  const double p0 = cure_rate(eta, p, truths.phi());

  SplitMix64 rng(2024);
  const int n = 100000;
  int cured = 0;
  for (int i = 0; i < n; ++i)
    cured += gen_subject(ulcer, thickness, truths, 0.15, rng).active_risks == 0;
  CHECK(std::abs(static_cast<double>(cured) / n - p0) < 0.005);
}

TEST_CASE("uncensored lifetimes follow the population survival function" *
          doctest::timeout(60)) {
  ParamVector truths = table_truths(-0.847, 0.304);
  const double thickness = 3.0;
  const double p = logistic_link(vec({1.0, thickness}), truths.beta1());
  const double eta = loglinear_link(vec({1.0}), truths.beta2());

  SplitMix64 rng(5150);
  const int n = 100000;
  std::vector<double> lifetimes;  // +inf for cured subjects
  lifetimes.reserve(n);
  for (int i = 0; i < n; ++i)
    lifetimes.push_back(gen_subject(1, thickness, truths, 0.0, rng).y);

  double worst = 0.0;
  for (double y = 0.5; y <= 30.0; y += 0.5) {
    int alive = 0;
    for (double t : lifetimes) alive += t > y;
    const double s_hat = static_cast<double>(alive) / n;
    const double s_mod =
        pop_survival(y, eta, p, truths.phi(), truths.gamma1(), truths.gamma2());
    worst = std::max(worst, std::abs(s_hat - s_mod));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("core samplers reproduce the risk-count masses" *
          doctest::timeout(60)) {
  const double eta = 3.0, phi = 0.5, p = 0.5;
  SplitMix64 rng(31337);
  const std::int64_t n = 1000000;
  std::vector<std::int64_t> m_counts(64, 0), d_counts(64, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const long m = rng::negative_binomial(rng, eta, phi);
    const long d = m > 0 ? rng::binomial(rng, m, p) : 0;
    if (m >= static_cast<long>(m_counts.size())) m_counts.resize(m + 1, 0);
    if (d >= static_cast<long>(d_counts.size())) d_counts.resize(d + 1, 0);
    ++m_counts[m];
    ++d_counts[d];
  }
  CHECK(testsup::tv_distance(m_counts, n,
                             [&](long m) { return nb_pmf(m, eta, phi); }) <
        0.005);
  CHECK(testsup::tv_distance(d_counts, n, [&](long d) {
          return active_risk_pmf(d, eta, phi, p);
        }) < 0.005);
}

TEST_CASE("datasets regenerate bit-identically under a fixed seed") {
  SimSetting setting;
  setting.n = 50;
  SplitMix64 r1 = substream(setting.seed, 3);
  SplitMix64 r2 = substream(setting.seed, 3);
  const GeneratedData a = gen_dataset(setting, r1);
  const GeneratedData b = gen_dataset(setting, r2);
  CHECK(a.data.fingerprint() == b.data.fingerprint());
  CHECK(a.truths.flat() == b.truths.flat());
  REQUIRE(a.data.n() == b.data.n());
  for (int i = 0; i < a.data.n(); ++i) {
    CHECK(a.data[i].y == b.data[i].y);
    CHECK(a.data[i].delta == b.data[i].delta);
  }

  SimSetting one;
  one.n = 1;
  SplitMix64 r3(9);
  CHECK(gen_dataset(one, r3).data.n() == 1);
}

TEST_CASE("censored fraction strictly exceeds the cure fraction") {
  SimSetting setting;
  setting.n = 10000;
  SplitMix64 rng = substream(setting.seed, 11);
  const GeneratedData gen = gen_dataset(setting, rng);

  int censored = 0;
  for (int i = 0; i < gen.data.n(); ++i) censored += gen.data[i].delta == 0;

  double cure_sum = 0.0;
  for (int i = 0; i < gen.data.n(); ++i) {
    const Subject& s = gen.data[i];
    const double p = logistic_link(s.x_p, gen.truths.beta1());
    const double eta = loglinear_link(s.x_eta, gen.truths.beta2());
    cure_sum += cure_rate(eta, p, gen.truths.phi());
  }
  CHECK(static_cast<double>(censored) / gen.data.n() >
        cure_sum / gen.data.n());
}

TEST_CASE("initial guesses live in the 20% box and stay feasible") {
  SplitMix64 rng(60601);
  ParamVector truths = table_truths(-0.847, 0.304);
  std::vector<double> phis;
  for (int i = 0; i < 10000; ++i) {
    const ParamVector g = initial_guess(truths, rng);
    CHECK(is_feasible(g));
    CHECK(g.phi() >= 0.8 * 0.5);
    CHECK(g.phi() <= 1.2 * 0.5);
    CHECK(g.beta1()[0] >= -0.847 * 1.2);
    CHECK(g.beta1()[0] <= -0.847 * 0.8);
    phis.push_back(g.phi());
  }
  CHECK(std::abs(testsup::mean(phis) - 0.5) < 0.01 * 0.5);

  // an exactly zero coordinate degenerates to itself
  ParamVector zero_slope(0.5, vec({0.0, 0.3}), vec({1.0}), 0.2, 0.2);
  const ParamVector g = initial_guess(zero_slope, rng);
  CHECK(g.beta1()[0] == 0.0);

  // truths near the floor get projected back up
  ParamVector tiny(1.2e-6, vec({0.1, 0.1}), vec({0.1}), 0.2, 0.2);
  for (int i = 0; i < 200; ++i) CHECK(is_feasible(initial_guess(tiny, rng)));
}

TEST_CASE("mc study: single and paired replicates" * doctest::timeout(120)) {
  SimSetting setting;
  setting.n = 60;
  setting.seed = 777;
  OptimizerConfig cfg;
  cfg.k_max = 300;

  SUBCASE("one replicate makes RMSE equal |bias|") {
    const MCReport rep =
        run_mc_study(setting, 1, {CgVariant::HagerZhang}, cfg);
    for (int j = 0; j < rep.bias[0].size(); ++j)
      CHECK(rep.rmse[0][j] == doctest::Approx(std::abs(rep.bias[0][j]))
                                  .epsilon(1e-12));
  }

  SUBCASE("two replicates equal the hand-combined statistics") {
    const MCReport rep =
        run_mc_study(setting, 2, {CgVariant::HagerZhang}, cfg);
    for (int j = 0; j < rep.bias[0].size(); ++j) {
      const double e0 = rep.estimates[0][0][j] - rep.truths[0][j];
      const double e1 = rep.estimates[0][1][j] - rep.truths[1][j];
      CHECK(rep.bias[0][j] == doctest::Approx(0.5 * (e0 + e1)).epsilon(1e-12));
      CHECK(rep.rmse[0][j] ==
            doctest::Approx(std::sqrt(0.5 * (e0 * e0 + e1 * e1)))
                .epsilon(1e-12));
      CHECK(rep.rmse[0][j] >= std::abs(rep.bias[0][j]) - 1e-15);
    }
  }

  SUBCASE("reports are deterministic and thread-count invariant") {
    const MCReport a = run_mc_study(
        setting, 4, {CgVariant::HagerZhang, CgVariant::DaiYuan}, cfg, 1);
    const MCReport b = run_mc_study(
        setting, 4, {CgVariant::HagerZhang, CgVariant::DaiYuan}, cfg, 4);
    for (int v = 0; v < 2; ++v) {
      CHECK(a.bias[v] == b.bias[v]);
      CHECK(a.rmse[v] == b.rmse[v]);
    }
    CHECK(a.dataset_fingerprints == b.dataset_fingerprints);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(run_mc_study(setting, 0, {CgVariant::HagerZhang}, cfg),
                    UsageError);
    CHECK_THROWS_AS(run_mc_study(setting, 1, {}, cfg), UsageError);
  }
}
