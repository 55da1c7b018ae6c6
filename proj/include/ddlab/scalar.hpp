#pragma once

// Exact rational scalars. Every coordinate and every metric value in the
// library is a Scalar; there is no floating point on any exact path.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddlab {

using Integer = mpz_class;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator (GMP canonical form). Zero is 0/1.
using Scalar = mpq_class;

inline Scalar make_scalar(long num, long den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

inline Scalar make_scalar(const Integer& num, const Integer& den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

namespace detail {

inline std::string normalize_minus(std::string_view text) {
  // Accept the typographic minus (U+2212) next to ASCII '-'.
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else if (text[i] != ' ') {
      out.push_back(text[i]);
    }
  }
  return out;
}

inline Integer parse_integer(const std::string& digits, std::string_view whole) {
  Integer z;
  if (digits.empty() || z.set_str(digits, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  return z;
}

}  // namespace detail

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed input
/// and std::domain_error on a zero denominator.
inline Scalar parse_scalar(std::string_view text) {
  const std::string s = detail::normalize_minus(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    return Scalar(detail::parse_integer(s, text));
  }
  const Integer num = detail::parse_integer(s.substr(0, slash), text);
  const std::string den_text = s.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw std::invalid_argument("denominator must be unsigned: '" + std::string(text) + "'");
  }
  return make_scalar(num, detail::parse_integer(den_text, text));
}

/// Always "num/den", including integers ("3/1").
inline std::string to_string(const Scalar& s) {
  return s.get_num().get_str() + "/" + s.get_den().get_str();
}

/// Shortest form: "3" for integers, "num/den" otherwise. Used for display only.
inline std::string to_display(const Scalar& s) {
  if (s.get_den() == 1) return s.get_num().get_str();
  return to_string(s);
}

inline std::size_t hash_integer(const Integer& z) {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t h = static_cast<std::size_t>(p->_mp_size) * 0x9E3779B97F4A7C15ULL;
  const auto limbs = static_cast<std::size_t>(p->_mp_size < 0 ? -p->_mp_size : p->_mp_size);
  for (std::size_t i = 0; i < limbs; ++i) {
    h ^= static_cast<std::size_t>(p->_mp_d[i]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

struct ScalarHash {
  std::size_t operator()(const Scalar& s) const noexcept {
    const std::size_t h = hash_integer(s.get_num());
    return h ^ (hash_integer(s.get_den()) + 0x517CC1B727220A95ULL + (h << 6) + (h >> 2));
  }
};

inline bool is_integer(const Scalar& s) { return s.get_den() == 1; }

/// Exact square root of a rational when it exists.
inline bool exact_sqrt(const Scalar& s, Scalar& root) {
  if (sgn(s) < 0) return false;
  if (mpz_perfect_square_p(s.get_num_mpz_t()) == 0 ||
      mpz_perfect_square_p(s.get_den_mpz_t()) == 0) {
    return false;
  }
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), s.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), s.get_den_mpz_t());
  root = make_scalar(n, d);
  return true;
}

}  // namespace ddlab
