#include "dnbcure/model.hpp"

#include <cmath>

#include "dnbcure/errors.hpp"
#include "dnbcure/util.hpp"

namespace dnbcure {

namespace {

void check_link_dims(const Eigen::VectorXd& x, const Eigen::VectorXd& b,
                     const char* who) {
  if (x.size() != b.size())
    throw UsageError(std::string(who) + ": covariate/coefficient length mismatch");
}

void check_weibull(double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw DomainError("weibull: gamma1 and gamma2 must be positive");
}

void check_nb(double eta, double phi) {
  if (!(eta > 0.0)) throw DomainError("nb_pmf: eta must be positive");
  if (!(phi > 0.0)) throw DomainError("nb_pmf: phi must be positive");
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
}

}  // namespace

double logistic_link(const Eigen::VectorXd& x_p, const Eigen::VectorXd& beta1) {
  check_link_dims(x_p, beta1, "logistic_link");
  const double t = x_p.dot(beta1);
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double loglinear_link(const Eigen::VectorXd& x_eta,
                      const Eigen::VectorXd& beta2) {
  check_link_dims(x_eta, beta2, "loglinear_link");
  return std::exp(x_eta.dot(beta2));
}

double weibull_cdf(double y, double gamma1, double gamma2) {
  check_weibull(gamma1, gamma2);
  if (y < 0.0) throw DomainError("weibull_cdf: y must be nonnegative");
  if (y == 0.0) return 0.0;
  const double u = std::exp(std::log(gamma2 * y) / gamma1);
  return -std::expm1(-u);
}

double weibull_pdf(double y, double gamma1, double gamma2) {
  check_weibull(gamma1, gamma2);
  if (!(y > 0.0)) throw DomainError("weibull_pdf: y must be positive");
  const double log_u = std::log(gamma2 * y) / gamma1;
  const double u = std::exp(log_u);
  // f = u * exp(-u) / (gamma1 * y), assembled in logs to dodge overflow.
  return std::exp(log_u - u - std::log(gamma1 * y));
}

double nb_pmf(long m, double eta, double phi) {
  if (m < 0) throw UsageError("nb_pmf: m must be nonnegative");
  check_nb(eta, phi);
  const double r = 1.0 / phi;
  const double log_ratio = std::log(phi * eta) - std::log1p(phi * eta);
  double log_p = -r * std::log1p(phi * eta);
  if (m > 0) {
    log_p += std::lgamma(m + r) - std::lgamma(r) - std::lgamma(m + 1.0) +
             m * log_ratio;
  }
  return std::exp(log_p);
}

double active_risk_pmf(long d, double eta, double phi, double p) {
  if (d < 0) throw UsageError("active_risk_pmf: d must be nonnegative");
  check_nb(eta, phi);
  check_p(p);
  if (p == 0.0) return d == 0 ? 1.0 : 0.0;  // every risk destroyed
  return nb_pmf(d, eta * p, phi);
}

double pop_survival(double y, double eta, double p, double phi, double gamma1,
                    double gamma2) {
  check_nb(eta, phi);
  check_p(p);
  if (y < 0.0) throw DomainError("pop_survival: y must be nonnegative");
  const double big_f = y == 0.0 ? 0.0 : weibull_cdf(y, gamma1, gamma2);
  return std::exp(-std::log1p(phi * eta * p * big_f) / phi);
}

double pop_density(double y, double eta, double p, double phi, double gamma1,
                   double gamma2) {
  check_nb(eta, phi);
  check_p(p);
  check_weibull(gamma1, gamma2);
  if (!(y > 0.0)) throw DomainError("pop_density: y must be positive");
  if (p == 0.0) return 0.0;
  const double log_u = std::log(gamma2 * y) / gamma1;
  const double u = std::exp(log_u);
  double big_f = -std::expm1(-u);
  if (big_f > 1.0 - 1e-16) big_f = 1.0 - 1e-16;  // keep the ratio finite at saturation
  const double log1p_a = std::log1p(phi * eta * p * big_f);
  const double log_little_f = log_u - u - std::log(gamma1 * y);
  return std::exp(std::log(eta * p) + log_little_f -
                  (1.0 + 1.0 / phi) * log1p_a);
}

double cure_rate(double eta, double p, double phi) {
  check_nb(eta, phi);
  check_p(p);
  return std::exp(-std::log1p(phi * eta * p) / phi);
}

}  // namespace dnbcure
