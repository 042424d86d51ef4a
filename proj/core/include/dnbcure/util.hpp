#ifndef DNBCURE_UTIL_HPP
#define DNBCURE_UTIL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace dnbcure {

/// log(1 + exp(x)) without overflow across the whole real line.
inline double log1pexp(double x) {
  if (x > 37.0) return x + std::exp(-x);
  if (x > -37.0) return std::log1p(std::exp(x));
  return std::exp(x);
}

/// log(sigmoid(x)) = -log(1 + exp(-x)), stable for large |x|.
inline double log_logistic(double x) { return -log1pexp(-x); }

/// FNV-1a 64-bit over a byte range; used for dataset fingerprints.
inline std::uint64_t fnv1a64(const void* bytes, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dnbcure

#endif
