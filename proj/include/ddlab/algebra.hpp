#pragma once

#include "ddlab/scalar.hpp"

#include <optional>
#include <vector>

namespace ddlab {

/// Distinct rational roots of a*u^2 + b*u + c = 0, ascending. Irrational
/// roots are dropped (callers only look for rational points). Returns nullopt
/// when the polynomial is identically zero.
inline std::optional<std::vector<Scalar>> rational_roots(const Scalar& a, const Scalar& b, const Scalar& c) {
  std::vector<Scalar> roots;
  if (sgn(a) == 0) {
    if (sgn(b) == 0) {
      if (sgn(c) == 0) return std::nullopt;
      return roots;
    }
    roots.emplace_back(-c / b);
    return roots;
  }
  const Scalar disc = b * b - 4 * a * c;
  if (sgn(disc) < 0) return roots;
  Scalar root;
  if (!exact_sqrt(disc, root)) return roots;
  const Scalar two_a = 2 * a;
  Scalar r1 = (-b - root) / two_a;
  Scalar r2 = (-b + root) / two_a;
  if (r2 < r1) std::swap(r1, r2);
  roots.push_back(r1);
  if (r2 != r1) roots.push_back(r2);
  return roots;
}

/// Number of distinct real roots of a*u^2 + b*u + c; nullopt if identically zero.
inline std::optional<int> real_root_count(const Scalar& a, const Scalar& b, const Scalar& c) {
  if (sgn(a) == 0) {
    if (sgn(b) != 0) return 1;
    if (sgn(c) != 0) return 0;
    return std::nullopt;
  }
  const int s = sgn(Scalar(b * b - 4 * a * c));
  return s < 0 ? 0 : (s == 0 ? 1 : 2);
}

}  // namespace ddlab
