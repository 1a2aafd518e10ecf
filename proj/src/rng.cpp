#include "vpgmres/rng.hpp"

#include <cmath>

namespace vpgmres {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// ln(x) for x in (0, 1]: range reduction to [sqrt(1/2), sqrt(2)) and an
// atanh series, |t| <= 0.1716 so thirteen terms reach ~1e-15 relative.
// Uses only correctly rounded double ops; accuracy is ample for sampling.
double portable_log(double x) {
  int e = 0;
  double m = std::frexp(x, &e);  // m in [0.5, 1)
  if (m < 0.7071067811865476) {
    m *= 2.0;
    e -= 1;
  }
  const double t = (m - 1.0) / (m + 1.0);
  const double t2 = t * t;
  double s = 1.0 / 13.0;
  s = s * t2 + 1.0 / 11.0;
  s = s * t2 + 1.0 / 9.0;
  s = s * t2 + 1.0 / 7.0;
  s = s * t2 + 1.0 / 5.0;
  s = s * t2 + 1.0 / 3.0;
  s = s * t2 + 1.0;
  const double ln2 = 0.6931471805599453;
  return 2.0 * t * s + static_cast<double>(e) * ln2;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(mix64(seed + kGolden)) {}

Rng Rng::substream(std::uint64_t index) const {
  Rng child(0);
  child.state_ = mix64(state_ + (index + 1) * kGolden);
  child.has_cached_ = false;
  return child;
}

std::uint64_t Rng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  for (;;) {
    const double u = 2.0 * next_double() - 1.0;
    const double v = 2.0 * next_double() - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * portable_log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }
}

}  // namespace vpgmres
