#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dnbcure/errors.hpp"
#include "dnbcure/model.hpp"
#include "helpers/test_support.hpp"

using namespace dnbcure;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("logistic link: hand values, saturation, errors") {
  CHECK(logistic_link(vec({1.0, 0.0}), vec({0.0, 5.0})) == doctest::Approx(0.5));
  // melanoma-scale coefficients, linear predictor -2.38664
  CHECK(logistic_link(vec({1.0, 2.92}), vec({-5.841, 1.183})) ==
        doctest::Approx(0.0842).epsilon(1e-3));

  const double hi = logistic_link(vec({1.0}), vec({1000.0}));
  CHECK(hi > 1.0 - 1e-12);
  CHECK(hi <= 1.0);
  const double lo = logistic_link(vec({1.0}), vec({-1000.0}));
  CHECK(lo >= 0.0);
  CHECK(lo < 1e-12);

  CHECK_THROWS_AS(logistic_link(vec({1.0, 2.0}), vec({1.0})), UsageError);
}

TEST_CASE("log-linear link: hand values and errors") {
  CHECK(loglinear_link(vec({0.0}), vec({4.2})) == doctest::Approx(1.0));
  CHECK(loglinear_link(vec({1.0}), vec({1.099})) ==
        doctest::Approx(3.0012).epsilon(1e-4));
  CHECK_THROWS_AS(loglinear_link(vec({1.0}), vec({1.0, 2.0})), UsageError);
}

TEST_CASE("weibull cdf: closed form, limits, monotonicity") {
  CHECK(weibull_cdf(0.0, 0.5, 0.5) == 0.0);
  CHECK(weibull_cdf(2.0, 1.0, 0.5) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(weibull_cdf(1e9, 0.215, 0.183) - 1.0) < 1e-15);

  double prev = -1.0;
  for (double y = 0.0; y <= 50.0; y += 0.25) {
    const double f = weibull_cdf(y, 0.316, 0.179);
    CHECK(f >= prev);
    CHECK(f <= 1.0);  // saturates to 1 in doubles deep in the tail
    prev = f;
  }

  CHECK_THROWS_AS(weibull_cdf(1.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(weibull_cdf(1.0, 0.5, -1.0), DomainError);
  CHECK_THROWS_AS(weibull_cdf(-1.0, 0.5, 0.5), DomainError);
}

TEST_CASE("weibull pdf: hand value, derivative of cdf, normalization") {
  CHECK(weibull_pdf(2.0, 1.0, 0.5) ==
        doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));

  const double g1 = 0.316, g2 = 0.179;
  const double fd = testsup::central_diff(
      [&](double y) { return weibull_cdf(y, g1, g2); }, 3.0, 1e-6);
  const double pdf = weibull_pdf(3.0, g1, g2);
  CHECK(std::abs(fd - pdf) / pdf < 1e-6);

  // mass: integrate to a point where the survival tail is < 1e-9
  const double mass = testsup::integrate(
      [&](double y) { return y <= 0.0 ? 0.0 : weibull_pdf(y, 0.215, 0.183); },
      0.0, 60.0, 1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(weibull_pdf(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(weibull_pdf(-2.0, 1.0, 1.0), DomainError);
}

TEST_CASE("nb pmf: geometric special case and normalization") {
  CHECK(nb_pmf(0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nb_pmf(1, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));

  const double total =
      testsup::sum_pmf([](long m) { return nb_pmf(m, 3.0, 0.5); }, 2000);
  CHECK(std::abs(total - 1.0) < 1e-10);

  CHECK_THROWS_AS(nb_pmf(-1, 1.0, 1.0), UsageError);
  CHECK_THROWS_AS(nb_pmf(0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(nb_pmf(0, 1.0, -0.5), DomainError);
}

TEST_CASE("active risk pmf: boundary p, equivalence, cure rate at d=0") {
  CHECK(active_risk_pmf(0, 3.0, 0.5, 0.0) == 1.0);
  CHECK(active_risk_pmf(4, 3.0, 0.5, 0.0) == 0.0);
  CHECK(active_risk_pmf(0, 3.0, 0.5, 0.5) ==
        doctest::Approx(cure_rate(3.0, 0.5, 0.5)).epsilon(1e-12));

  // exact match with the thinned negative binomial closed form
  for (long d = 0; d <= 200; ++d) {
    CHECK(active_risk_pmf(d, 3.0, 0.5, 0.37) ==
          nb_pmf(d, 3.0 * 0.37, 0.5));
  }
}

TEST_CASE("active risk pmf matches brute-force binomial thinning" *
          doctest::timeout(60)) {
  const double eta = 3.0, phi = 0.5, p = 0.5;
  const std::int64_t n_draws = 1000000;
  std::mt19937_64 gen(991);
  std::vector<std::int64_t> counts(64, 0);
  for (std::int64_t i = 0; i < n_draws; ++i) {
    const long d = testsup::thinned_nb_draw(gen, eta, phi, p);
    if (d >= static_cast<long>(counts.size()))
      counts.resize(static_cast<std::size_t>(d) + 1, 0);
    ++counts[static_cast<std::size_t>(d)];
  }
  const double tv = testsup::tv_distance(
      counts, n_draws, [&](long d) { return active_risk_pmf(d, eta, phi, p); });
  CHECK(tv < 0.005);
}

TEST_CASE("population survival: boundaries, plateau, monotonicity") {
  CHECK(pop_survival(0.0, 3.0, 0.5, 0.5, 0.215, 0.183) == 1.0);
  // limit equals the cure rate (1.75)^-2
  CHECK(pop_survival(1e12, 3.0, 0.5, 0.5, 0.215, 0.183) ==
        doctest::Approx(0.32653061224489793).epsilon(1e-9));

  double prev = 2.0;
  for (double y = 0.0; y <= 50.0; y += 0.1) {
    const double s = pop_survival(y, 3.0, 0.5, 0.5, 0.215, 0.183);
    CHECK(s <= prev);
    CHECK(s > 0.0);
    prev = s;
  }
  CHECK_THROWS_AS(pop_survival(1.0, -1.0, 0.5, 0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(pop_survival(1.0, 1.0, 1.5, 0.5, 1.0, 1.0), DomainError);
}

TEST_CASE("population density: derivative of survival and susceptible mass") {
  const double eta = 3.0, p = 0.5, phi = 0.5, g1 = 0.215, g2 = 0.183;
  CHECK(pop_density(2.0, eta, 0.0, phi, g1, g2) == 0.0);

  const double fd = -testsup::central_diff(
      [&](double y) { return pop_survival(y, eta, p, phi, g1, g2); }, 2.0,
      1e-6);
  const double f = pop_density(2.0, eta, p, phi, g1, g2);
  CHECK(std::abs(fd - f) / std::abs(f) < 1e-4);

  const double p0 = cure_rate(eta, p, phi);
  const double mass = testsup::integrate(
      [&](double y) {
        return y <= 0.0 ? 0.0 : pop_density(y, eta, p, phi, g1, g2);
      },
      0.0, 80.0, 1e-10);
  CHECK(std::abs(mass - (1.0 - p0)) < 1e-5);

  CHECK_THROWS_AS(pop_density(0.0, eta, p, phi, g1, g2), DomainError);
}

TEST_CASE("cure rate: hand values and strict monotonicity") {
  CHECK(cure_rate(3.0, 0.0, 0.5) == 1.0);
  CHECK(cure_rate(1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

  double prev = cure_rate(0.1, 0.5, 0.5);
  for (double eta = 0.3; eta <= 8.0; eta += 0.2) {
    const double c = cure_rate(eta, 0.5, 0.5);
    CHECK(c < prev);
    prev = c;
  }
  prev = cure_rate(3.0, 0.01, 0.5);
  for (double p = 0.05; p <= 1.0; p += 0.05) {
    const double c = cure_rate(3.0, p, 0.5);
    CHECK(c < prev);
    prev = c;
  }
}

TEST_CASE("pmf normalization and identity checks over a random grid") {
  std::mt19937_64 gen(424242);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double eta = 0.2 + 8.0 * u01(gen);
    const double phi = 0.1 + 5.0 * u01(gen);
    const double p = u01(gen);

    const double nb_total =
        testsup::sum_pmf([&](long m) { return nb_pmf(m, eta, phi); });
    CHECK(std::abs(nb_total - 1.0) < 1e-10);

    const double d_total = testsup::sum_pmf(
        [&](long d) { return active_risk_pmf(d, eta, phi, p); });
    CHECK(std::abs(d_total - 1.0) < 1e-10);

    // cure rate = P[D=0] = survival plateau
    const double c = cure_rate(eta, p, phi);
    CHECK(std::abs(c - active_risk_pmf(0, eta, phi, p)) < 1e-12);
    CHECK(std::abs(c - pop_survival(1e13, eta, p, phi, 0.8, 0.4)) < 1e-9);
  }
}

TEST_CASE("density equals -dS/dy at random points") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double eta = 0.3 + 5.0 * u01(gen);
    const double phi = 0.2 + 3.0 * u01(gen);
    const double p = 0.05 + 0.9 * u01(gen);
    const double g1 = 0.1 + 0.9 * u01(gen);
    const double g2 = 0.05 + 0.9 * u01(gen);
    // keep y inside the bulk of the progression-time distribution; beyond
    // it the density drops under the fd oracle's cancellation noise floor
    const double y_hi = std::pow(-std::log(0.005), g1) / g2;
    const double y = (0.02 + 0.96 * u01(gen)) * y_hi;

    const double f = pop_density(y, eta, p, phi, g1, g2);
    CHECK(f >= 0.0);
    const double fd = -testsup::central_diff(
        [&](double t) { return pop_survival(t, eta, p, phi, g1, g2); }, y,
        1e-6 * std::max(1.0, y));
    CHECK(std::abs(fd - f) <= 1e-4 * std::max(std::abs(f), 1e-7));
  }
}
