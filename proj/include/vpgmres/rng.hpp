#pragma once

#include <cstdint>

namespace vpgmres {

/// Deterministic splittable random stream. All draws are built from integer
/// arithmetic plus IEEE-754 double operations only, so identical seeds give
/// identical streams on every platform. Value type: copy freely, no global
/// state.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed);

  /// Independent child stream; children with distinct indices are
  /// decorrelated from each other and from the parent.
  Rng substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  double uniform(double lo, double hi);
  /// Standard normal via the polar method. The logarithm is evaluated by a
  /// local polynomial so the stream stays platform-independent.
  double normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace vpgmres
