#include "dnbcure/likelihood.hpp"

#include <cmath>

#include "dnbcure/errors.hpp"
#include "dnbcure/util.hpp"

namespace dnbcure {

namespace {

void require_strictly_feasible(const ParamVector& theta, const char* who) {
  if (!is_feasible(theta))
    throw DomainError(std::string(who) + ": theta outside the feasible set");
}

// Per-subject pieces shared by value and gradient.
//   t = x_p . beta1          log p = -log(1+exp(-t))
//   z = x_eta . beta2        log eta = z
//   u = (gamma2 y)^(1/gamma1), F = 1-exp(-u) clamped below 1
//   A = phi eta p F
struct SubjectTerms {
  double p, log_p, eta, log_eta;
  double lw;      // log(gamma2 * y)
  double u, exp_neg_u, big_f;
  double a, log1p_a;
};

SubjectTerms subject_terms(const ParamVector& theta, const Dataset& data,
                           int i) {
  const Subject& s = data[i];
  SubjectTerms st;
  const double t = s.x_p.dot(theta.beta1());
  st.log_p = log_logistic(t);
  st.p = std::exp(st.log_p);
  st.log_eta = s.x_eta.dot(theta.beta2());
  st.eta = std::exp(st.log_eta);
  st.lw = std::log(theta.gamma2()) + data.log_y(i);
  st.u = std::exp(st.lw / theta.gamma1());
  st.exp_neg_u = std::exp(-st.u);
  st.big_f = -std::expm1(-st.u);
  if (st.big_f > 1.0 - 1e-16) st.big_f = 1.0 - 1e-16;
  st.a = theta.phi() * st.eta * st.p * st.big_f;
  st.log1p_a = std::log1p(st.a);
  return st;
}

}  // namespace

double log_likelihood(const ParamVector& theta, const Dataset& data) {
  require_strictly_feasible(theta, "log_likelihood");
  if (data.n() < 1) throw DataError("log_likelihood: empty dataset");
  if (data.q1() != theta.q1() || data.q2() != theta.q2())
    throw UsageError("log_likelihood: theta/data dimension mismatch");

  const double phi = theta.phi();
  const double gamma1 = theta.gamma1();
  double ll = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    const SubjectTerms st = subject_terms(theta, data, i);
    if (data[i].delta == 0) {
      ll += -st.log1p_a / phi;
    } else {
      // log f_pop = log eta + log p + log f_W - (1+1/phi) log(1+A)
      const double log_f_w =
          st.lw / gamma1 - st.u - std::log(gamma1) - data.log_y(i);
      ll += st.log_eta + st.log_p + log_f_w - (1.0 + 1.0 / phi) * st.log1p_a;
    }
  }
  return ll;
}

GradientVector grad_log_likelihood(const ParamVector& theta,
                                   const Dataset& data) {
  require_strictly_feasible(theta, "grad_log_likelihood");
  if (data.n() < 1) throw DataError("grad_log_likelihood: empty dataset");
  if (data.q1() != theta.q1() || data.q2() != theta.q2())
    throw UsageError("grad_log_likelihood: theta/data dimension mismatch");

  const double phi = theta.phi();
  const double gamma1 = theta.gamma1();
  const double gamma2 = theta.gamma2();
  const int q1 = theta.q1();
  const int q2 = theta.q2();

  GradientVector g = GradientVector::Zero(theta.dim());
  auto g_beta1 = g.segment(1, q1);
  auto g_beta2 = g.segment(1 + q1, q2);
  double g_phi = 0.0, g_gamma1 = 0.0, g_gamma2 = 0.0;

  for (int i = 0; i < data.n(); ++i) {
    const Subject& s = data[i];
    const SubjectTerms st = subject_terms(theta, data, i);
    const double ratio = st.a / (1.0 + st.a);  // A/(1+A)
    const int delta = s.delta;

    // phi: dl/dphi = log(1+A)/phi^2 - c_phi * (A/phi)/(1+A)
    // with c_phi = 1/phi (censored) or 1+1/phi (event).
    const double c_phi = delta ? 1.0 + 1.0 / phi : 1.0 / phi;
    g_phi += st.log1p_a / (phi * phi) - c_phi * ratio / phi;

    // Regression blocks share the scalar
    //   slope = delta - ((delta*phi + 1)/phi) * A/(1+A).
    const double slope = delta - (delta * phi + 1.0) / phi * ratio;
    g_beta1 += slope * (1.0 - st.p) * s.x_p;
    g_beta2 += slope * s.x_eta;

    // Weibull block. du/dgamma1 = -u lw / gamma1^2, du/dgamma2 = u/(gamma1 gamma2);
    // dA/dgamma = phi eta p exp(-u) du/dgamma. The event terms use
    // d log f_W/dgamma with (1/u) du/dgamma expanded analytically so the
    // expressions stay finite as u -> 0.
    const double du_dg1 = -st.u * st.lw / (gamma1 * gamma1);
    const double du_dg2 = st.u / (gamma1 * gamma2);
    const double shared =
        (delta * phi + 1.0) * st.eta * st.p * st.exp_neg_u / (1.0 + st.a);
    if (delta == 0) {
      g_gamma1 += -shared * du_dg1;
      g_gamma2 += -shared * du_dg2;
    } else {
      g_gamma1 += -1.0 / gamma1 - st.lw / (gamma1 * gamma1) -
                  du_dg1 * (1.0 + shared);
      g_gamma2 += 1.0 / (gamma1 * gamma2) - du_dg2 * (1.0 + shared);
    }
  }

  g[0] = g_phi;
  g[g.size() - 2] = g_gamma1;
  g[g.size() - 1] = g_gamma2;

  for (int j = 0; j < g.size(); ++j) {
    if (!std::isfinite(g[j]))
      throw NumericalError("grad_log_likelihood: non-finite component");
  }
  return g;
}

GradientVector fd_gradient(const ParamVector& theta, const Dataset& data,
                           double h) {
  if (!(h > 0.0)) throw UsageError("fd_gradient: step h must be positive");
  require_strictly_feasible(theta, "fd_gradient");
  const int dim = theta.dim();
  GradientVector g(dim);
  Eigen::VectorXd flat = theta.flat();
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd lo = flat, hi = flat;
    hi[j] += h;
    lo[j] -= h;
    if (!is_feasible_flat(lo) || !is_feasible_flat(hi))
      throw DomainError("fd_gradient: step crosses the feasibility boundary");
    const double f_hi = log_likelihood(
        ParamVector::from_flat(hi, theta.q1(), theta.q2()), data);
    const double f_lo = log_likelihood(
        ParamVector::from_flat(lo, theta.q1(), theta.q2()), data);
    g[j] = (f_hi - f_lo) / (2.0 * h);
  }
  return g;
}

GradientVector fd_gradient(const ParamVector& theta, const Dataset& data) {
  require_strictly_feasible(theta, "fd_gradient");
  const int dim = theta.dim();
  GradientVector g(dim);
  const Eigen::VectorXd& flat = theta.flat();
  for (int j = 0; j < dim; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(flat[j]));
    Eigen::VectorXd lo = flat, hi = flat;
    hi[j] += h;
    lo[j] -= h;
    if (!is_feasible_flat(lo) || !is_feasible_flat(hi))
      throw DomainError("fd_gradient: step crosses the feasibility boundary");
    const double f_hi = log_likelihood(
        ParamVector::from_flat(hi, theta.q1(), theta.q2()), data);
    const double f_lo = log_likelihood(
        ParamVector::from_flat(lo, theta.q1(), theta.q2()), data);
    g[j] = (f_hi - f_lo) / (2.0 * h);
  }
  return g;
}

}  // namespace dnbcure
