#ifndef DNBCURE_OPTIMIZER_HPP
#define DNBCURE_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "dnbcure/data.hpp"
#include "dnbcure/params.hpp"

namespace dnbcure {

enum class CgVariant { HagerZhang, FletcherReeves, DaiYuan, SteepestAscent };

std::string to_string(CgVariant v);
CgVariant variant_from_string(const std::string& name);  // "hz","fr","dy","sd"

struct OptimizerConfig {
  int k_max = 500;
  double tol = 1e-3;          // relative-change stopping threshold
  double lambda = 0.1;        // Armijo constant, in (0, 1/2)
  double s_init = 1.0;        // first trial step
  double backtrack = 0.5;     // step contraction factor
  int max_backtracks = 50;
  CgVariant variant = CgVariant::HagerZhang;
  double denom_floor = 1e-8;  // floor for the relative-change denominator

  void validate() const;  // throws UsageError
};

struct TraceEntry {
  int k = 0;                // iteration index (0 = initial point)
  double value = 0.0;       // objective after this iteration
  double step = 0.0;        // accepted step length s_k
  double xi = 0.0;          // CG mixing coefficient used to form d_{k+1}
  double dir_dot_grad = 0;  // d_k . g_k at the accepted step
  bool projection_active = false;
  bool restarted = false;   // d was reset to g entering this iteration
};

struct FitResult {
  Eigen::VectorXd theta_hat;  // best-so-far point (flat layout)
  double value = 0.0;         // objective there (log-likelihood for fits)
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

/// Objective callbacks for the generic ascent driver. `project` defaults to
/// the identity (unconstrained problems).
struct Objective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project;
};

// Conjugate-direction mixing coefficients. Each returns 0 on a degenerate
// denominator, which the driver treats as a steepest-ascent restart.

/// Hager-Zhang: xi = (w - 2 d (w.w)/(d.w))' g_next / (d.w), w = g_next - g_prev.
double hz_coefficient(const Eigen::VectorXd& d, const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev);

/// Fletcher-Reeves: xi = |g_next|^2 / |g_prev|^2.
double fr_coefficient(const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev);

/// Dai-Yuan: xi = |g_next|^2 / (d . (g_next - g_prev)).
double dy_coefficient(const Eigen::VectorXd& d, const Eigen::VectorXd& g_next,
                      const Eigen::VectorXd& g_prev);

/// Backtracking line search on the projected candidate. Returns the first
/// s in {s_init * backtrack^j, j = 0..max_backtracks} with
///   value(project(theta + s d)) >= value(theta) + lambda * s * (d.g),
/// or 0 when every trial fails. Requires d.g > 0 (throws UsageError).
double armijo_search(const std::function<double(const Eigen::VectorXd&)>& value,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project,
                     const Eigen::VectorXd& theta, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& g, const OptimizerConfig& cfg);

/// || (new_j - old_j) / max(|old_j|, denom_floor) ||_2.
double relative_change(const Eigen::VectorXd& theta_new,
                       const Eigen::VectorXd& theta_old, double denom_floor);

/// Projected nonlinear conjugate gradient ascent with Armijo line search.
/// Restarts (d reset to the gradient) fire on a non-ascent direction, a
/// degenerate xi denominator, or line-search exhaustion. Returns the
/// best-visited point by objective value.
FitResult maximize(const Objective& obj, const Eigen::VectorXd& x0,
                   const OptimizerConfig& cfg);

/// Maximum-likelihood fit of the cure rate model. theta0 is projected to
/// feasibility first; the returned theta_hat is in flat ParamVector layout.
FitResult fit(const Dataset& data, const ParamVector& theta0,
              const OptimizerConfig& cfg);

}  // namespace dnbcure

#endif
