#include "vpgmres/precision.hpp"

#include <cmath>
#include <limits>

#include "vpgmres/spectral.hpp"

namespace vpgmres {

const PrecisionFormat& format_of(PrecisionKind kind) {
  switch (kind) {
    case PrecisionKind::Binary16: return kBinary16;
    case PrecisionKind::Binary32: return kBinary32;
    default: return kBinary64;
  }
}

namespace {

bool is_binary64(const PrecisionFormat& fmt) {
  return fmt.stored_significand_bits >= 52 && fmt.exponent_bits >= 11;
}

}  // namespace

double round_to(double x, const PrecisionFormat& fmt) {
  if (is_binary64(fmt)) return x;
  if (!std::isfinite(x) || x == 0.0) return x;

  const int p = fmt.precision();
  const int emax = fmt.max_exponent();
  const int emin = fmt.min_normal_exponent();
  const double mag = std::abs(x);

  // Midpoint between the largest finite value and 2^(emax+1); ties round up
  // to the even 2^(emax+1), i.e. to infinity.
  const double overflow_threshold =
      std::ldexp(1.0, emax + 1) - std::ldexp(1.0, emax - p);
  if (mag >= overflow_threshold)
    return std::copysign(std::numeric_limits<double>::infinity(), x);

  // Quantum 2^q of the destination format at this magnitude (subnormals
  // share the quantum of the smallest normal binade). All steps below are
  // exact in binary64, so the single rounding happens at the tie check.
  const int e = std::ilogb(mag);
  const int q = std::max(e, emin) - (p - 1);
  const double scaled = std::ldexp(mag, -q);
  double r = std::floor(scaled);
  const double frac = scaled - r;
  if (frac > 0.5)
    r += 1.0;
  else if (frac == 0.5 && std::fmod(r, 2.0) != 0.0)
    r += 1.0;
  return std::copysign(std::ldexp(r, q), x);
}

double lowprec_dot(const Vector& v, const Vector& w,
                   const PrecisionFormat& fmt) {
  if (v.size() != w.size())
    throw std::invalid_argument("lowprec_dot: length mismatch");
  if (is_binary64(fmt)) return dot(v, w);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = round_to(v[i], fmt);
    const double b = round_to(w[i], fmt);
    const double prod = round_to(a * b, fmt);
    s = round_to(s + prod, fmt);
  }
  return s;
}

Vector lowprec_matvec(const Matrix& rounded_a, const Vector& v,
                      const PrecisionFormat& fmt) {
  if (rounded_a.ncols() != v.size())
    throw std::invalid_argument("lowprec_matvec: dimension mismatch");
  if (is_binary64(fmt)) return matvec(rounded_a, v);
  Vector vr(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) vr[i] = round_to(v[i], fmt);
  Vector w(rounded_a.nrows(), 0.0);
  if (!rounded_a.is_sparse()) {
    for (std::size_t i = 0; i < rounded_a.nrows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < rounded_a.ncols(); ++j) {
        const double prod = round_to(rounded_a(i, j) * vr[j], fmt);
        s = round_to(s + prod, fmt);
      }
      w[i] = s;
    }
  } else {
    const auto& rp = rounded_a.row_ptr();
    const auto& ci = rounded_a.col_idx();
    const auto& av = rounded_a.values();
    for (std::size_t i = 0; i < rounded_a.nrows(); ++i) {
      double s = 0.0;
      for (std::size_t ptr = rp[i]; ptr < rp[i + 1]; ++ptr) {
        const double prod = round_to(av[ptr] * vr[ci[ptr]], fmt);
        s = round_to(s + prod, fmt);
      }
      w[i] = s;
    }
  }
  return w;
}

namespace {

// Smallest e with |x| <= 2^e, so 2^(e_v + e_w + 1) dominates the product of
// the extreme entries.
int magnitude_exponent(double x) {
  int e = std::ilogb(x);
  if (std::ldexp(1.0, e) < std::abs(x)) ++e;
  return e;
}

}  // namespace

double dot_magnitude_estimate(const Vector& v, const Vector& w) {
  const double mv = norm_inf(v);
  const double mw = norm_inf(w);
  if (mv == 0.0 || mw == 0.0) return 0.0;
  return std::ldexp(1.0, magnitude_exponent(mv) + magnitude_exponent(mw) + 1);
}

const Matrix& RoundedMatrixCache::rounded(PrecisionKind kind) {
  if (kind == PrecisionKind::Binary64) return *source_;
  const std::size_t idx = static_cast<std::size_t>(kind);
  if (!have_rounded_[idx]) {
    const PrecisionFormat& fmt = format_of(kind);
    Matrix r = source_->map_values(
        [&](double v) { return round_to(v, fmt); });
    std::size_t bad_i = 0, bad_j = 0;
    bool overflow = false;
    r.for_each_stored([&](std::size_t i, std::size_t j, double v) {
      if (!overflow && std::isinf(v)) {
        overflow = true;
        bad_i = i;
        bad_j = j;
      }
    });
    if (overflow)
      throw FormatOverflowError(
          std::string("format overflow: entry (") + std::to_string(bad_i + 1) +
              "," + std::to_string(bad_j + 1) + ") exceeds " + fmt.label,
          bad_i, bad_j);
    rounded_[idx] = std::move(r);
    have_rounded_[idx] = true;
  }
  return rounded_[idx];
}

double RoundedMatrixCache::rounding_error(PrecisionKind kind) {
  if (kind == PrecisionKind::Binary64) return 0.0;
  const std::size_t idx = static_cast<std::size_t>(kind);
  if (!have_error_[idx]) {
    const Matrix& r = rounded(kind);
    // Rounding preserves the stored structure, so the value arrays align.
    Matrix diff;
    std::vector<double> dv(source_->values().size());
    for (std::size_t p = 0; p < dv.size(); ++p)
      dv[p] = source_->values()[p] - r.values()[p];
    if (source_->is_sparse()) {
      std::vector<Matrix::Triplet> tr;
      std::size_t p = 0;
      source_->for_each_stored([&](std::size_t i, std::size_t j, double) {
        tr.push_back({i, j, dv[p++]});
      });
      diff = Matrix::sparse_from_triplets(source_->nrows(), source_->ncols(),
                                          std::move(tr));
    } else {
      diff = Matrix::dense(source_->nrows(), source_->ncols(), std::move(dv));
    }
    double err = 0.0;
    try {
      err = matrix_norm2(diff, 1e-6, 20000);
    } catch (const NormEstimateError& e) {
      err = e.best;
    }
    error_[idx] = err;
    have_error_[idx] = true;
  }
  return error_[idx];
}

double matrix_rounding_error(const Matrix& A, const PrecisionFormat& fmt) {
  PrecisionKind kind = PrecisionKind::Binary64;
  if (!is_binary64(fmt)) {
    kind = fmt.stored_significand_bits == kBinary16.stored_significand_bits
               ? PrecisionKind::Binary16
               : PrecisionKind::Binary32;
  }
  RoundedMatrixCache cache(A);
  return cache.rounding_error(kind);
}

}  // namespace vpgmres
