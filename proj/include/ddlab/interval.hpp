#pragma once

// Directed-rounding enclosures over MPFR. Lower endpoints are always computed
// with MPFR_RNDD and upper endpoints with MPFR_RNDU, so the true real value
// is contained in [lower, upper] by construction.

#include "ddlab/scalar.hpp"

#include <mpfr.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace ddlab {

/// Owning handle for an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
  }
  BigFloat& operator=(BigFloat other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(value_); }

  [[nodiscard]] mpfr_ptr get() noexcept { return value_; }
  [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }
  [[nodiscard]] mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

  /// Decimal rendering rounded in the given direction, so printed bounds stay valid.
  [[nodiscard]] std::string str(mpfr_rnd_t rnd, int digits = 20) const {
    char* buf = nullptr;
    const char* fmt = rnd == MPFR_RNDD ? "%.*RDg" : rnd == MPFR_RNDU ? "%.*RUg" : "%.*RNg";
    if (mpfr_asprintf(&buf, fmt, digits, value_) < 0) throw std::runtime_error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

 private:
  mpfr_t value_;
};

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 64) : lo_(prec), hi_(prec) {
    mpfr_set_zero(lo_.get(), 1);
    mpfr_set_zero(hi_.get(), 1);
  }

  static Interval from_integer(const Integer& z, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return r;
  }

  static Interval from_scalar(const Scalar& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  [[nodiscard]] const BigFloat& lower() const noexcept { return lo_; }
  [[nodiscard]] const BigFloat& upper() const noexcept { return hi_; }
  [[nodiscard]] mpfr_prec_t precision() const noexcept { return lo_.precision(); }
  [[nodiscard]] bool nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }
  [[nodiscard]] double lower_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  [[nodiscard]] double upper_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
  [[nodiscard]] double mid_double() const { return 0.5 * (lower_double() + upper_double()); }

  [[nodiscard]] bool contains(const Scalar& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(a.precision());
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(a.precision());
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r(a.precision());
    BigFloat t(a.precision());
    const mpfr_srcptr al = a.lo_.get(), ah = a.hi_.get(), bl = b.lo_.get(), bh = b.hi_.get();
    mpfr_mul(r.lo_.get(), al, bl, MPFR_RNDD);
    mpfr_mul(r.hi_.get(), al, bl, MPFR_RNDU);
    for (const auto& [x, y] : {std::pair{al, bh}, std::pair{ah, bl}, std::pair{ah, bh}}) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      mpfr_min(r.lo_.get(), r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      mpfr_max(r.hi_.get(), r.hi_.get(), t.get(), MPFR_RNDU);
    }
    return r;
  }

  /// Requires b strictly positive.
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_.get()) <= 0) throw std::domain_error("interval division by a non-positive interval");
    Interval r(a.precision());
    if (mpfr_sgn(a.lo_.get()) >= 0) {
      mpfr_div(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    } else {
      mpfr_div(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    }
    if (mpfr_sgn(a.hi_.get()) >= 0) {
      mpfr_div(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    } else {
      mpfr_div(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    }
    return r;
  }

  /// Requires a nonnegative interval.
  [[nodiscard]] Interval sqrt() const {
    require_nonnegative("sqrt");
    Interval r(precision());
    mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
  }

  /// x^(p/q) for a nonnegative interval and a rational exponent.
  /// Evaluated as root then integer power; both steps are monotone, so the
  /// directed roundings compose. Negative exponents go through a reciprocal.
  [[nodiscard]] Interval pow(const Scalar& exponent) const {
    require_nonnegative("pow");
    if (sgn(exponent) == 0) return from_integer(1, precision());
    if (sgn(exponent) < 0) {
      return from_integer(1, precision()) / pow(Scalar(-exponent));
    }
    if (!exponent.get_num().fits_ulong_p() || !exponent.get_den().fits_ulong_p()) {
      throw std::domain_error("exponent too large");
    }
    const unsigned long p = exponent.get_num().get_ui();
    const unsigned long q = exponent.get_den().get_ui();
    Interval r(precision());
    mpfr_rootn_ui(r.lo_.get(), lo_.get(), q, MPFR_RNDD);
    mpfr_pow_ui(r.lo_.get(), r.lo_.get(), p, MPFR_RNDD);
    mpfr_rootn_ui(r.hi_.get(), hi_.get(), q, MPFR_RNDU);
    mpfr_pow_ui(r.hi_.get(), r.hi_.get(), p, MPFR_RNDU);
    return r;
  }

  /// Natural log; requires a strictly positive interval.
  [[nodiscard]] Interval log() const {
    if (mpfr_sgn(lo_.get()) <= 0) throw std::domain_error("interval log of a non-positive interval");
    Interval r(precision());
    mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
  }

  /// Certainly a <= b: every value of a is at most every value of b.
  friend bool certainly_le(const Interval& a, const Interval& b) {
    return mpfr_lessequal_p(a.hi_.get(), b.lo_.get()) != 0;
  }
  /// Certainly a > b.
  friend bool certainly_gt(const Interval& a, const Interval& b) {
    return mpfr_greater_p(a.lo_.get(), b.hi_.get()) != 0;
  }

  [[nodiscard]] std::string lower_str(int digits = 20) const { return lo_.str(MPFR_RNDD, digits); }
  [[nodiscard]] std::string upper_str(int digits = 20) const { return hi_.str(MPFR_RNDU, digits); }

 private:
  void require_nonnegative(const char* what) const {
    if (mpfr_sgn(lo_.get()) < 0) throw std::domain_error(std::string("interval ") + what + " of a negative interval");
  }

  BigFloat lo_;
  BigFloat hi_;
};

enum class Verdict { Holds, Violated, Undecided, Measured };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Undecided: return "UNDECIDED";
    case Verdict::Measured: return "MEASURED";
  }
  return "UNKNOWN";
}

struct CertifiedComparison {
  Verdict verdict = Verdict::Undecided;
  unsigned precision_bits = 0;
  Interval lhs{64};
  Interval rhs{64};
};

/// Adaptive-precision certified comparison lhs <= rhs. `sides(prec)` returns
/// the pair of enclosures at the requested precision; precision doubles from
/// `start_bits` up to `cap_bits`. A violation is only reported when the
/// enclosures are disjoint in the wrong order.
template <typename Sides>
CertifiedComparison certify_le(Sides&& sides, unsigned start_bits = 64, unsigned cap_bits = 1024) {
  if (start_bits < MPFR_PREC_MIN || start_bits > cap_bits) throw std::invalid_argument("bad precision range");
  CertifiedComparison out;
  for (unsigned bits = start_bits;; bits = bits * 2 > cap_bits && bits < cap_bits ? cap_bits : bits * 2) {
    auto [lhs, rhs] = sides(static_cast<mpfr_prec_t>(bits));
    out.precision_bits = bits;
    out.lhs = std::move(lhs);
    out.rhs = std::move(rhs);
    if (certainly_le(out.lhs, out.rhs)) {
      out.verdict = Verdict::Holds;
      return out;
    }
    if (certainly_gt(out.lhs, out.rhs)) {
      out.verdict = Verdict::Violated;
      return out;
    }
    if (bits >= cap_bits) break;
  }
  out.verdict = Verdict::Undecided;
  return out;
}

}  // namespace ddlab
