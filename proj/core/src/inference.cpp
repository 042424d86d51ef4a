#include "dnbcure/inference.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "dnbcure/errors.hpp"
#include "dnbcure/rng.hpp"

namespace dnbcure {

BootstrapResult bootstrap_se(const Dataset& data, const ParamVector& theta_hat,
                             int B, const OptimizerConfig& cfg,
                             std::uint64_t seed, int threads) {
  if (B < 2) throw UsageError("bootstrap_se: B must be >= 2");
  cfg.validate();
  if (!is_feasible(theta_hat))
    throw DomainError("bootstrap_se: theta_hat must be feasible");
  if (data.n() < 1) throw DataError("bootstrap_se: empty dataset");

  const int n = data.n();
  std::vector<Eigen::VectorXd> slot(B);
  std::vector<char> ok(B, 0);

  // Bootstrap substreams are tagged so they never collide with the Monte
  // Carlo replicate streams derived from the same user seed.
  const std::uint64_t stream_tag = mix64(seed ^ 0x626f6f7473747261ULL);

  auto run_resample = [&](int b) {
    SplitMix64 rng = substream(stream_tag, static_cast<std::uint64_t>(b));
    Dataset resample;
    resample.reserve(n);
    for (int i = 0; i < n; ++i) {
      const auto idx = rng::uniform_index(rng, static_cast<std::uint64_t>(n));
      resample.add(data[static_cast<int>(idx)]);
    }
    const FitResult fr = fit(resample, theta_hat, cfg);
    if (fr.converged) {
      slot[b] = fr.theta_hat;
      ok[b] = 1;
    }
  };

  const int workers = std::max(1, std::min(threads, B));
  if (workers == 1) {
    for (int b = 0; b < B; ++b) run_resample(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < B; b = next.fetch_add(1))
          run_resample(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  BootstrapResult out;
  out.B = B;
  for (int b = 0; b < B; ++b)
    if (ok[b]) out.estimates.push_back(slot[b]);
  out.failed_count = B - static_cast<int>(out.estimates.size());
  out.high_failure_warning = out.failed_count > B / 10;
  const int converged = static_cast<int>(out.estimates.size());
  if (converged == 0)
    throw NumericalError("bootstrap_se: no resample fit converged");

  const int dim = theta_hat.dim();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& e : out.estimates) mean += e;
  mean /= converged;
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(dim);
  for (const auto& e : out.estimates) {
    const Eigen::VectorXd d = e - mean;
    ss += d.cwiseProduct(d);
  }
  out.se = converged > 1
               ? (ss / (converged - 1)).cwiseSqrt().eval()
               : Eigen::VectorXd::Zero(dim).eval();
  return out;
}

}  // namespace dnbcure
