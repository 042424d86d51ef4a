#ifndef DNBCURE_SIMULATION_HPP
#define DNBCURE_SIMULATION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dnbcure/data.hpp"
#include "dnbcure/optimizer.hpp"
#include "dnbcure/params.hpp"
#include "dnbcure/rng.hpp"

namespace dnbcure {

/// One Monte Carlo scenario. Covariates mimic the melanoma study: ulceration
/// is Bernoulli(ulcer_prob); tumor thickness is Weibull with moments
/// (thick_ulcer_mean, thick_ulcer_var) when ulcerated and exponential with
/// mean thick_noulcer_mean otherwise. The activation-probability regression
/// truths (beta0, beta1) are re-solved per replicate from the generated
/// thickness range so that p spans [p_low, p_high].
struct SimSetting {
  int n = 300;
  double phi_true = 0.5;
  double gamma1_true = 0.215;
  double gamma2_true = 0.183;
  double beta2_true = 1.0986122886681098;  // log 3
  double p_low = 0.3;
  double p_high = 0.9;
  double ulcer_prob = 0.44;
  double thick_ulcer_mean = 4.34;
  double thick_ulcer_var = 10.37;
  double thick_noulcer_mean = 1.81;
  double censor_rate = 0.15;  // exponential rate of the censoring time
  std::uint64_t seed = 20290;

  void validate() const;  // throws ConfigError
};

struct Covariates {
  int ulcer = 0;
  double thickness = 0.0;
};

/// Per-subject latent history from the generative steps: initial risks M,
/// post-destruction risks D, the D progression times, censoring time C and
/// the resulting observation (Y, delta).
struct LatentDraw {
  long initial_risks = 0;                  // M
  long active_risks = 0;                   // D
  std::vector<double> progression_times;   // W_1..W_D
  double censoring_time = 0.0;             // C
  double y = 0.0;
  int delta = 0;
};

/// Weibull (shape k, scale lambda) with the requested mean and variance,
/// solved by bisection on the shape. Throws ConfigError when the moment
/// system has no solution on k in [0.1, 50].
std::pair<double, double> solve_weibull_moments(double mean, double variance);

/// Closed-form (beta0, beta1) such that logistic(beta0 + beta1 x) hits
/// p_low at x_min and p_high at x_max.
std::pair<double, double> solve_p_regression(double x_min, double x_max,
                                             double p_low, double p_high);

std::vector<Covariates> gen_covariates(const SimSetting& setting,
                                       SplitMix64& rng);

/// Generative steps for one subject. truths must be feasible with q1 = 2
/// (intercept + thickness) and q2 = 1 (ulcer). censor_rate 0 disables
/// censoring (C = +inf), in which case cured subjects keep y = +inf.
LatentDraw gen_subject(int ulcer, double thickness, const ParamVector& truths,
                       double censor_rate, SplitMix64& rng);

struct GeneratedData {
  Dataset data;
  ParamVector truths;  // includes the replicate-specific beta0, beta1
};

GeneratedData gen_dataset(const SimSetting& setting, SplitMix64& rng);

/// Starting point for a fit: each coordinate uniform on
/// [t_j - 0.2|t_j|, t_j + 0.2|t_j|], then projected to feasibility.
ParamVector initial_guess(const ParamVector& truths, SplitMix64& rng);

/// Bias/RMSE study over independent replicates. Replicate r runs on
/// substream (setting.seed, r); every variant sees the identical dataset and
/// initial guess, which is what makes the across-variant comparisons paired.
struct MCReport {
  std::vector<std::string> param_names;       // phi, beta0, beta1, beta2, gamma1, gamma2
  std::vector<CgVariant> variants;
  int reps = 0;
  // Indexed [variant][param]:
  std::vector<Eigen::VectorXd> bias;
  std::vector<Eigen::VectorXd> rmse;
  // Indexed [variant][replicate]:
  std::vector<std::vector<char>> converged;
  std::vector<std::vector<int>> iterations;
  // Retained per-replicate material (slot-indexed, deterministic):
  std::vector<Eigen::VectorXd> truths;               // [replicate]
  std::vector<std::vector<Eigen::VectorXd>> estimates;  // [variant][replicate]
  std::vector<std::uint64_t> dataset_fingerprints;   // [replicate]
  double wall_time_s = 0.0;

  double converged_fraction(int variant) const;
  double mean_iterations(int variant) const;
};

MCReport run_mc_study(const SimSetting& setting, int reps,
                      const std::vector<CgVariant>& variants,
                      const OptimizerConfig& cfg, int threads = 1);

}  // namespace dnbcure

#endif
