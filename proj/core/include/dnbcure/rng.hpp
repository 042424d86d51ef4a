#ifndef DNBCURE_RNG_HPP
#define DNBCURE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "dnbcure/errors.hpp"

namespace dnbcure {

// All stochastic machinery in this project runs on SplitMix64 with the
// samplers below, rather than std::<distribution>, so that a (seed, stream)
// pair maps to one bit-exact draw sequence independent of the standard
// library in use. Monte Carlo replicates and bootstrap resamples each get
// their own substream; see substream().

/// SplitMix64: 64-bit-state generator (Steele, Lea & Flood 2014).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Avalanche finalizer (the SplitMix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent substream for (seed, index); index 0 is a valid stream.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed) ^ mix64(~index * 0xda942042e4dd58b5ULL));
}

namespace rng {

/// Uniform on [0, 1) with 53-bit resolution.
inline double uniform01(SplitMix64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(SplitMix64& g, double a, double b) {
  return a + (b - a) * uniform01(g);
}

/// Uniform integer in [0, n); n must be positive.
inline std::uint64_t uniform_index(SplitMix64& g, std::uint64_t n) {
  // Lemire multiply-shift with rejection, exact for any n.
  std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t x = g();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    if (static_cast<std::uint64_t>(m) >= threshold)
      return static_cast<std::uint64_t>(m >> 64);
  }
}

inline int bernoulli(SplitMix64& g, double p) {
  return uniform01(g) < p ? 1 : 0;
}

/// Exponential with the given rate; rate 0 yields +infinity (no event).
inline double exponential(SplitMix64& g, double rate) {
  if (rate < 0.0) throw UsageError("exponential: negative rate");
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-uniform01(g)) / rate;
}

/// Weibull with shape k and scale lambda (F(x) = 1 - exp(-(x/lambda)^k)).
inline double weibull(SplitMix64& g, double shape, double scale) {
  return scale * std::pow(-std::log1p(-uniform01(g)), 1.0 / shape);
}

/// Standard normal via the Marsaglia polar method.
inline double std_normal(SplitMix64& g) {
  for (;;) {
    double u = 2.0 * uniform01(g) - 1.0;
    double v = 2.0 * uniform01(g) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

/// Gamma(shape, scale) via Marsaglia-Tsang, with the power boost for
/// shape < 1.
inline double gamma(SplitMix64& g, double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) throw UsageError("gamma: nonpositive parameter");
  if (shape < 1.0) {
    double u = uniform01(g);
    return gamma(g, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = std_normal(g);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform01(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

/// Poisson via Knuth's product method; large means are split so the
/// product never underflows.
inline long poisson(SplitMix64& g, double mean) {
  if (mean < 0.0) throw UsageError("poisson: negative mean");
  if (mean == 0.0) return 0;
  long total = 0;
  while (mean > 256.0) {
    // Poisson(m) = Poisson(m/2) + Poisson(m/2), independent halves.
    double half = mean / 2.0;
    total += poisson(g, half);
    mean -= half;
  }
  const double limit = std::exp(-mean);
  long k = 0;
  double prod = uniform01(g);
  while (prod > limit) {
    ++k;
    prod *= uniform01(g);
  }
  return total + k;
}

/// Binomial(n, p) as a sum of Bernoulli trials (n stays small here).
inline long binomial(SplitMix64& g, long n, double p) {
  long d = 0;
  for (long j = 0; j < n; ++j) d += bernoulli(g, p);
  return d;
}

/// Negative binomial with mean eta and dispersion phi, drawn through the
/// gamma-Poisson mixture: M ~ Poisson(L), L ~ Gamma(1/phi, phi*eta).
inline long negative_binomial(SplitMix64& g, double eta, double phi) {
  if (eta <= 0.0 || phi <= 0.0)
    throw UsageError("negative_binomial: nonpositive parameter");
  return poisson(g, gamma(g, 1.0 / phi, phi * eta));
}

}  // namespace rng
}  // namespace dnbcure

#endif
