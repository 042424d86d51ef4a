#include "dnbcure/params.hpp"

#include <algorithm>

#include "dnbcure/errors.hpp"

namespace dnbcure {

ParamVector::ParamVector(double phi, Eigen::VectorXd beta1,
                         Eigen::VectorXd beta2, double gamma1, double gamma2)
    : q1_(static_cast<int>(beta1.size())), q2_(static_cast<int>(beta2.size())) {
  if (q1_ < 1 || q2_ < 1)
    throw UsageError("ParamVector: beta1 and beta2 must be nonempty");
  flat_.resize(3 + q1_ + q2_);
  flat_[0] = phi;
  flat_.segment(1, q1_) = beta1;
  flat_.segment(1 + q1_, q2_) = beta2;
  flat_[flat_.size() - 2] = gamma1;
  flat_[flat_.size() - 1] = gamma2;
}

ParamVector ParamVector::from_flat(const Eigen::VectorXd& flat, int q1,
                                   int q2) {
  if (q1 < 1 || q2 < 1 || flat.size() != 3 + q1 + q2)
    throw UsageError("ParamVector::from_flat: inconsistent dimensions");
  return ParamVector(flat, q1, q2);
}

std::vector<std::string> ParamVector::names() const {
  std::vector<std::string> out;
  out.reserve(dim());
  out.emplace_back("phi");
  for (int j = 0; j < q1_; ++j) out.push_back("beta1[" + std::to_string(j) + "]");
  for (int j = 0; j < q2_; ++j) out.push_back("beta2[" + std::to_string(j) + "]");
  out.emplace_back("gamma1");
  out.emplace_back("gamma2");
  return out;
}

Eigen::VectorXd project_flat(const Eigen::VectorXd& flat) {
  Eigen::VectorXd out = flat;
  const auto last = out.size() - 1;
  out[0] = std::max(kFeasibilityEps, out[0]);
  out[last - 1] = std::max(kFeasibilityEps, out[last - 1]);
  out[last] = std::max(kFeasibilityEps, out[last]);
  return out;
}

ParamVector project(const ParamVector& theta) {
  return ParamVector::from_flat(project_flat(theta.flat()), theta.q1(),
                                theta.q2());
}

bool is_feasible_flat(const Eigen::VectorXd& flat) {
  const auto last = flat.size() - 1;
  return flat[0] >= kFeasibilityEps && flat[last - 1] >= kFeasibilityEps &&
         flat[last] >= kFeasibilityEps;
}

bool is_feasible(const ParamVector& theta) {
  return is_feasible_flat(theta.flat());
}

}  // namespace dnbcure
