#include "dnbcure/data.hpp"

#include <cmath>

#include "dnbcure/errors.hpp"
#include "dnbcure/util.hpp"

namespace dnbcure {

void Dataset::add(Subject s) {
  if (!(s.y > 0.0))
    throw DataError("Dataset: observed time must be positive (row " +
                    std::to_string(subjects_.size() + 1) + ")");
  if (s.delta != 0 && s.delta != 1)
    throw DataError("Dataset: status must be 0 or 1 (row " +
                    std::to_string(subjects_.size() + 1) + ")");
  if (s.x_p.size() < 1 || s.x_p[0] != 1.0)
    throw DataError("Dataset: x_p must carry a leading intercept 1 (row " +
                    std::to_string(subjects_.size() + 1) + ")");
  if (s.x_eta.size() < 1)
    throw DataError("Dataset: x_eta must be nonempty (row " +
                    std::to_string(subjects_.size() + 1) + ")");
  if (q1_ < 0) {
    q1_ = static_cast<int>(s.x_p.size());
    q2_ = static_cast<int>(s.x_eta.size());
  } else if (s.x_p.size() != q1_ || s.x_eta.size() != q2_) {
    throw DataError("Dataset: inconsistent covariate dimensions (row " +
                    std::to_string(subjects_.size() + 1) + ")");
  }
  log_y_.push_back(std::log(s.y));
  subjects_.push_back(std::move(s));
}

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Subject& s : subjects_) {
    h = fnv1a64(&s.y, sizeof(s.y), h);
    h = fnv1a64(&s.delta, sizeof(s.delta), h);
    h = fnv1a64(s.x_p.data(), sizeof(double) * s.x_p.size(), h);
    h = fnv1a64(s.x_eta.data(), sizeof(double) * s.x_eta.size(), h);
  }
  return h;
}

}  // namespace dnbcure
