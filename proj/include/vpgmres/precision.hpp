#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "vpgmres/core.hpp"

namespace vpgmres {

/// IEEE-754 binary interchange format parameters.
struct PrecisionFormat {
  const char* label;
  int exponent_bits;
  int stored_significand_bits;
  double unit_roundoff;  // 2^-p with p the precision including hidden bit

  int precision() const { return stored_significand_bits + 1; }
  int max_exponent() const { return (1 << (exponent_bits - 1)) - 1; }
  int min_normal_exponent() const { return 1 - max_exponent(); }
};

inline constexpr PrecisionFormat kBinary16{"binary16", 5, 10, 0x1.0p-11};
inline constexpr PrecisionFormat kBinary32{"binary32", 8, 23, 0x1.0p-24};
inline constexpr PrecisionFormat kBinary64{"binary64", 11, 52, 0x1.0p-53};

enum class PrecisionKind { Binary16 = 0, Binary32 = 1, Binary64 = 2 };

const PrecisionFormat& format_of(PrecisionKind kind);
inline const char* label_of(PrecisionKind kind) {
  return format_of(kind).label;
}

struct FormatOverflowError : std::runtime_error {
  FormatOverflowError(const std::string& what, std::size_t i, std::size_t j)
      : std::runtime_error(what), row(i), col(j) {}
  std::size_t row, col;
};

/// Correctly rounded (to nearest, ties to even) conversion of a binary64
/// value into `fmt`, returned as binary64. Subnormals are honored; values
/// past the overflow threshold become signed infinity. NaN and infinities
/// pass through.
double round_to(double x, const PrecisionFormat& fmt);

/// Dot product emulated in `fmt`: operands are rounded into the format and
/// every multiply and running add is rounded immediately after the
/// operation (sequential left-to-right accumulation). The final value is
/// returned as binary64; overflow propagates as infinity.
double lowprec_dot(const Vector& v, const Vector& w,
                   const PrecisionFormat& fmt);

/// Row-wise lowprec_dot against a matrix whose entries were pre-rounded
/// into `fmt` (see RoundedMatrixCache).
Vector lowprec_matvec(const Matrix& rounded_a, const Vector& v,
                      const PrecisionFormat& fmt);

/// 2^(e_v + e_w + 1) where e_v is the binary exponent of the largest-
/// magnitude entry of v. Magnitude scale for the inner-product error model;
/// returns 0 for a zero vector.
double dot_magnitude_estimate(const Vector& v, const Vector& w);

/// Matrix copies rounded per format, plus ||A - round(A, fmt)||_2, both
/// computed once per format and cached. Throws FormatOverflowError naming
/// the first entry that rounds to infinity.
class RoundedMatrixCache {
 public:
  explicit RoundedMatrixCache(const Matrix& A) : source_(&A) {}

  const Matrix& rounded(PrecisionKind kind);
  double rounding_error(PrecisionKind kind);

 private:
  const Matrix* source_;
  std::array<Matrix, 3> rounded_;
  std::array<bool, 3> have_rounded_{};
  std::array<double, 3> error_{};
  std::array<bool, 3> have_error_{};
};

/// ||A - round_to(A, fmt)||_2 via power iteration on the difference,
/// relative tolerance 1e-6. Uncached convenience wrapper.
double matrix_rounding_error(const Matrix& A, const PrecisionFormat& fmt);

}  // namespace vpgmres
