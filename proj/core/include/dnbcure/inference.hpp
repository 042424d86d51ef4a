#ifndef DNBCURE_INFERENCE_HPP
#define DNBCURE_INFERENCE_HPP

#include <cstdint>
#include <vector>

#include "dnbcure/data.hpp"
#include "dnbcure/optimizer.hpp"
#include "dnbcure/params.hpp"

namespace dnbcure {

struct BootstrapResult {
  Eigen::VectorXd se;       // per-parameter standard error (flat layout)
  int B = 0;                // requested resamples
  int failed_count = 0;     // resamples whose fit did not converge
  bool high_failure_warning = false;  // failed_count > 10% of B
  std::vector<Eigen::VectorXd> estimates;  // converged resample estimates
};

/// Nonparametric bootstrap: B with-replacement resamples of the subject
/// rows, each refit from theta_hat; se_j is the sample standard deviation
/// (denominator B'-1) over the B' converged resamples. Resample b draws its
/// data from substream (seed, b), so results are independent of the thread
/// schedule. Throws UsageError for B < 2 and NumericalError when every
/// resample fails to converge.
BootstrapResult bootstrap_se(const Dataset& data, const ParamVector& theta_hat,
                             int B, const OptimizerConfig& cfg,
                             std::uint64_t seed, int threads = 1);

}  // namespace dnbcure

#endif
