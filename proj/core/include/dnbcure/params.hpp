#ifndef DNBCURE_PARAMS_HPP
#define DNBCURE_PARAMS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace dnbcure {

/// Full unknown parameter vector theta = (phi, beta1, beta2, gamma1, gamma2).
///
/// Flat layout (used by the optimizer and gradients, in this order):
///   [0]               phi      dispersion, > 0
///   [1 .. q1]         beta1    activation-probability coefficients
///                              (beta1[0] is the intercept)
///   [1+q1 .. q1+q2]   beta2    mean-risk coefficients (no intercept)
///   [dim-2]           gamma1   Weibull parameter, > 0
///   [dim-1]           gamma2   Weibull rate-like parameter, > 0
class ParamVector {
 public:
  ParamVector(double phi, Eigen::VectorXd beta1, Eigen::VectorXd beta2,
              double gamma1, double gamma2);

  /// Reinterpret a flat vector of length 3 + q1 + q2.
  static ParamVector from_flat(const Eigen::VectorXd& flat, int q1, int q2);

  double phi() const { return flat_[0]; }
  double gamma1() const { return flat_[flat_.size() - 2]; }
  double gamma2() const { return flat_[flat_.size() - 1]; }
  Eigen::VectorBlock<const Eigen::VectorXd> beta1() const {
    return flat_.segment(1, q1_);
  }
  Eigen::VectorBlock<const Eigen::VectorXd> beta2() const {
    return flat_.segment(1 + q1_, q2_);
  }

  int q1() const { return q1_; }
  int q2() const { return q2_; }
  int dim() const { return static_cast<int>(flat_.size()); }
  const Eigen::VectorXd& flat() const { return flat_; }

  /// Parameter labels in flat order ("phi", "beta1[0]", ..., "gamma2").
  std::vector<std::string> names() const;

 private:
  ParamVector(Eigen::VectorXd flat, int q1, int q2)
      : flat_(std::move(flat)), q1_(q1), q2_(q2) {}

  Eigen::VectorXd flat_;
  int q1_;
  int q2_;
};

/// Gradient of the log-likelihood, aligned with the ParamVector layout.
using GradientVector = Eigen::VectorXd;

/// Feasibility floor for the positivity-constrained coordinates.
inline constexpr double kFeasibilityEps = 1e-6;

/// Coordinatewise clamp onto the constraint set: phi, gamma1, gamma2 are
/// floored at kFeasibilityEps, the regression coefficients pass through.
/// Idempotent.
ParamVector project(const ParamVector& theta);

/// Flat-layout variant used inside the optimizer loop.
Eigen::VectorXd project_flat(const Eigen::VectorXd& flat);

/// True iff phi, gamma1, gamma2 all sit at or above the feasibility floor.
bool is_feasible(const ParamVector& theta);
bool is_feasible_flat(const Eigen::VectorXd& flat);

}  // namespace dnbcure

#endif
