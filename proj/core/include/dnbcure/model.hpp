#ifndef DNBCURE_MODEL_HPP
#define DNBCURE_MODEL_HPP

#include <Eigen/Dense>

namespace dnbcure {

// Closed-form building blocks of the destructive negative-binomial cure
// rate model with Weibull progression times.
//
//   initial risks   M ~ NB(eta, phi)
//   active risks    D | M ~ Binomial(M, p)   (marginally NB(eta*p, phi))
//   progression     W_j ~ Weibull:  F(y) = 1 - exp(-(gamma2*y)^(1/gamma1))
//   lifetime        Y = min W_j,  Y = +inf when D = 0
//
//   S_pop(y) = (1 + phi*eta*p*F(y))^(-1/phi)
//   f_pop(y) = eta*p*f(y)*S_pop(y) / (1 + phi*eta*p*F(y))
//   p0       = (1 + phi*eta*p)^(-1/phi)            (cure rate)

/// Logistic link p = exp(x'b)/(1+exp(x'b)), evaluated in the sign-split
/// stable form (no overflow for |x'b| up to ~700).
double logistic_link(const Eigen::VectorXd& x_p, const Eigen::VectorXd& beta1);

/// Log-linear link eta = exp(x'b).
double loglinear_link(const Eigen::VectorXd& x_eta,
                      const Eigen::VectorXd& beta2);

/// Weibull distribution function F(y) = 1 - exp(-(gamma2*y)^(1/gamma1)).
double weibull_cdf(double y, double gamma1, double gamma2);

/// Weibull density f(y) = (gamma2*y)^(1/gamma1) * (1-F(y)) / (gamma1*y).
double weibull_pdf(double y, double gamma1, double gamma2);

/// Negative binomial mass
///   P[M=m] = Gamma(m+1/phi)/(Gamma(1/phi) m!) (phi*eta/(1+phi*eta))^m
///            (1+phi*eta)^(-1/phi),
/// computed through log-gamma.
double nb_pmf(long m, double eta, double phi);

/// Mass of the post-destruction risk count D: the same NB form with eta
/// replaced by eta*p. p = 0 degenerates to a point mass at zero.
double active_risk_pmf(long d, double eta, double phi, double p);

/// Population (long-term) survival function of the lifetime.
double pop_survival(double y, double eta, double p, double phi, double gamma1,
                    double gamma2);

/// Population density -dS_pop/dy.
double pop_density(double y, double eta, double p, double phi, double gamma1,
                   double gamma2);

/// Cure rate p0 = P[D=0] = lim_{y->inf} S_pop(y).
double cure_rate(double eta, double p, double phi);

}  // namespace dnbcure

#endif
