#ifndef DNBCURE_DATA_HPP
#define DNBCURE_DATA_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace dnbcure {

/// One observed tuple: follow-up time, event indicator and the two
/// covariate slots. x_p feeds the logistic link for the activation
/// probability p and carries a leading 1 (intercept); x_eta feeds the
/// log-linear link for the mean risk count eta and has no intercept.
struct Subject {
  double y = 0.0;
  int delta = 0;
  Eigen::VectorXd x_p;
  Eigen::VectorXd x_eta;
};

/// Column-consistent container of subjects. Validates on insertion:
/// y > 0, delta in {0,1}, x_p[0] == 1, and all rows share (q1, q2).
class Dataset {
 public:
  Dataset() = default;

  void add(Subject s);
  void reserve(std::size_t n) { subjects_.reserve(n); }

  int n() const { return static_cast<int>(subjects_.size()); }
  int q1() const { return q1_; }
  int q2() const { return q2_; }
  const Subject& operator[](int i) const { return subjects_[i]; }
  const std::vector<Subject>& subjects() const { return subjects_; }

  /// log(y_i), cached for the likelihood hot path.
  double log_y(int i) const { return log_y_[i]; }

  /// Order-sensitive FNV-1a fingerprint of all rows (bit-exact).
  std::uint64_t fingerprint() const;

 private:
  std::vector<Subject> subjects_;
  std::vector<double> log_y_;
  int q1_ = -1;
  int q2_ = -1;
};

}  // namespace dnbcure

#endif
