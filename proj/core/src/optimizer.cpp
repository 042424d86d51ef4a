#include "dnbcure/optimizer.hpp"

#include <cmath>

#include "dnbcure/errors.hpp"
#include "dnbcure/likelihood.hpp"

namespace dnbcure {

std::string to_string(CgVariant v) {
  switch (v) {
    case CgVariant::HagerZhang: return "hz";
    case CgVariant::FletcherReeves: return "fr";
    case CgVariant::DaiYuan: return "dy";
    case CgVariant::SteepestAscent: return "sd";
  }
  return "?";
}

CgVariant variant_from_string(const std::string& name) {
  if (name == "hz") return CgVariant::HagerZhang;
  if (name == "fr") return CgVariant::FletcherReeves;
  if (name == "dy") return CgVariant::DaiYuan;
  if (name == "sd") return CgVariant::SteepestAscent;
  throw UsageError("unknown CG variant '" + name + "' (want hz|fr|dy|sd)");
}

void OptimizerConfig::validate() const {
  if (!(lambda > 0.0 && lambda < 0.5))
    throw UsageError("OptimizerConfig: lambda must lie in (0, 1/2)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw UsageError("OptimizerConfig: backtrack factor must lie in (0,1)");
  if (k_max < 1) throw UsageError("OptimizerConfig: k_max must be >= 1");
  if (!(tol > 0.0)) throw UsageError("OptimizerConfig: tol must be positive");
  if (!(s_init > 0.0)) throw UsageError("OptimizerConfig: s_init must be positive");
  if (max_backtracks < 0)
    throw UsageError("OptimizerConfig: max_backtracks must be >= 0");
  if (!(denom_floor > 0.0))
    throw UsageError("OptimizerConfig: denom_floor must be positive");
}

namespace {

// Degenerate-denominator guard shared by HZ and DY.
bool denominator_degenerate(double dw, const Eigen::VectorXd& d,
                            const Eigen::VectorXd& w) {
  return std::abs(dw) < 1e-12 * (1.0 + d.norm() * w.norm());
}

}  // namespace

double hz_coefficient(const Eigen::VectorXd& d, const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev) {
  if (d.size() != g_next.size() || d.size() != g_prev.size())
    throw UsageError("hz_coefficient: dimension mismatch");
  const Eigen::VectorXd w = g_next - g_prev;
  const double dw = d.dot(w);
  if (denominator_degenerate(dw, d, w)) return 0.0;
  return (w - 2.0 * d * (w.dot(w) / dw)).dot(g_next) / dw;
}

double fr_coefficient(const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev) {
  if (g_next.size() != g_prev.size())
    throw UsageError("fr_coefficient: dimension mismatch");
  const double denom = g_prev.squaredNorm();
  if (denom < 1e-24) return 0.0;
  return g_next.squaredNorm() / denom;
}

double dy_coefficient(const Eigen::VectorXd& d, const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev) {
  if (d.size() != g_next.size() || d.size() != g_prev.size())
    throw UsageError("dy_coefficient: dimension mismatch");
  const Eigen::VectorXd w = g_next - g_prev;
  const double dw = d.dot(w);
  if (denominator_degenerate(dw, d, w)) return 0.0;
  return g_next.squaredNorm() / dw;
}

double armijo_search(const std::function<double(const Eigen::VectorXd&)>& value,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project,
                     const Eigen::VectorXd& theta, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& g, const OptimizerConfig& cfg) {
  const double dg = d.dot(g);
  if (!(dg > 0.0))
    throw UsageError("armijo_search: d is not an ascent direction (d.g <= 0)");
  const double f0 = value(theta);
  double s = cfg.s_init;
  for (int j = 0; j <= cfg.max_backtracks; ++j) {
    const Eigen::VectorXd candidate =
        project ? project(theta + s * d) : (theta + s * d).eval();
    if (value(candidate) >= f0 + cfg.lambda * s * dg) return s;
    s *= cfg.backtrack;
  }
  return 0.0;
}

double relative_change(const Eigen::VectorXd& theta_new,
                       const Eigen::VectorXd& theta_old, double denom_floor) {
  if (theta_new.size() != theta_old.size())
    throw UsageError("relative_change: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < theta_new.size(); ++j) {
    const double denom = std::max(std::abs(theta_old[j]), denom_floor);
    const double r = (theta_new[j] - theta_old[j]) / denom;
    sum += r * r;
  }
  return std::sqrt(sum);
}

FitResult maximize(const Objective& obj, const Eigen::VectorXd& x0,
                   const OptimizerConfig& cfg) {
  cfg.validate();
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project = obj.project;
  if (!project) project = [](const Eigen::VectorXd& v) { return v; };

  Eigen::VectorXd x = project(x0);
  Eigen::VectorXd g = obj.gradient(x);
  Eigen::VectorXd d = g;
  double f = obj.value(x);

  FitResult res;
  res.trace.push_back({0, f, 0.0, 0.0, d.dot(g), false, false});
  res.theta_hat = x;
  res.value = f;

  bool d_is_gradient = true;  // whether d was (re)set to g this round
  bool restarted_flag = false;

  for (int k = 0; k < cfg.k_max; ++k) {
    // Stationary point: nothing to do beyond the trivial iteration.
    if (g.norm() < 1e-12) {
      res.trace.push_back({k + 1, f, 0.0, 0.0, 0.0, false, restarted_flag});
      res.iterations = k + 1;
      res.converged = true;
      return res;
    }

    if (d.dot(g) <= 0.0) {  // direction went stale; fall back to the gradient
      d = g;
      d_is_gradient = true;
      restarted_flag = true;
    }

    const double dg = d.dot(g);
    const double s = armijo_search(obj.value, project, x, d, g, cfg);
    if (s == 0.0) {
      if (d_is_gradient) {
        // No sufficient increase even along the gradient: stuck.
        res.iterations = k + 1;
        res.converged = false;
        return res;
      }
      d = g;  // retry this iteration's search along the gradient
      d_is_gradient = true;
      restarted_flag = true;
      continue;
    }

    const Eigen::VectorXd step_target = x + s * d;
    const Eigen::VectorXd x_next = project(step_target);
    const bool projection_active =
        (x_next.array() != step_target.array()).any();
    const Eigen::VectorXd g_next = obj.gradient(x_next);
    const double f_next = obj.value(x_next);

    double xi = 0.0;
    switch (cfg.variant) {
      case CgVariant::HagerZhang: xi = hz_coefficient(d, g_next, g); break;
      case CgVariant::FletcherReeves: xi = fr_coefficient(g_next, g); break;
      case CgVariant::DaiYuan: xi = dy_coefficient(d, g_next, g); break;
      case CgVariant::SteepestAscent: xi = 0.0; break;
    }
    Eigen::VectorXd d_next = g_next + xi * d;
    bool next_restarted = false;
    if (d_next.dot(g_next) <= 0.0) {
      d_next = g_next;
      next_restarted = true;
    }

    res.trace.push_back(
        {k + 1, f_next, s, xi, dg, projection_active, restarted_flag});
    if (f_next > res.value) {
      res.value = f_next;
      res.theta_hat = x_next;
    }

    const double rc = relative_change(x_next, x, cfg.denom_floor);
    x = x_next;
    g = g_next;
    d = d_next;
    f = f_next;
    d_is_gradient = next_restarted;
    restarted_flag = next_restarted;
    res.iterations = k + 1;

    if (rc < cfg.tol) {
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  return res;
}

FitResult fit(const Dataset& data, const ParamVector& theta0,
              const OptimizerConfig& cfg) {
  cfg.validate();
  if (data.n() < 1) throw DataError("fit: empty dataset");
  const int q1 = data.q1();
  const int q2 = data.q2();
  if (theta0.q1() != q1 || theta0.q2() != q2)
    throw UsageError("fit: theta0/data dimension mismatch");

  Objective obj;
  obj.value = [&data, q1, q2](const Eigen::VectorXd& v) {
    return log_likelihood(ParamVector::from_flat(v, q1, q2), data);
  };
  obj.gradient = [&data, q1, q2](const Eigen::VectorXd& v) {
    return grad_log_likelihood(ParamVector::from_flat(v, q1, q2), data);
  };
  obj.project = [](const Eigen::VectorXd& v) { return project_flat(v); };

  return maximize(obj, theta0.flat(), cfg);
}

}  // namespace dnbcure
