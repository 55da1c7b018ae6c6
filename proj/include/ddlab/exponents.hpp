#pragma once

// Symbolic bookkeeping for power laws in (m, n): monomials with exact
// rational exponents, the incidence-bound substitution, and the balancing
// step that solves m^a n^b = m^c n^d for m = n^e.

#include "ddlab/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddlab {

/// tag * m^m_exp * n^n_exp. The tag records hidden factors ("O*" hides
/// polylogarithms); it never takes part in the arithmetic.
struct PowerTerm {
  Scalar m_exp;
  Scalar n_exp;
  std::string tag = "O*";

  PowerTerm() = default;
  PowerTerm(Scalar m, Scalar n, std::string t = "O*") : m_exp(std::move(m)), n_exp(std::move(n)), tag(std::move(t)) {}

  friend PowerTerm operator*(const PowerTerm& l, const PowerTerm& r) {
    return {Scalar(l.m_exp + r.m_exp), Scalar(l.n_exp + r.n_exp), l.tag};
  }
  friend PowerTerm operator/(const PowerTerm& l, const PowerTerm& r) {
    return {Scalar(l.m_exp - r.m_exp), Scalar(l.n_exp - r.n_exp), l.tag};
  }
  [[nodiscard]] PowerTerm pow(const Scalar& e) const { return {Scalar(m_exp * e), Scalar(n_exp * e), tag}; }

  friend bool operator==(const PowerTerm& l, const PowerTerm& r) { return l.m_exp == r.m_exp && l.n_exp == r.n_exp; }
};

inline std::string to_display(const PowerTerm& t) {
  return "m^" + to_display(t.m_exp) + " n^" + to_display(t.n_exp);
}

inline PowerTerm power_of_m(const Scalar& e) { return {e, Scalar(0)}; }
inline PowerTerm power_of_n(const Scalar& e) { return {Scalar(0), e}; }
inline PowerTerm unit_term() { return {Scalar(0), Scalar(0)}; }

/// e with lhs = term at m = n^e.
inline Scalar balance_exponent(const PowerTerm& lhs, const PowerTerm& term) {
  if (lhs.m_exp == term.m_exp) throw std::invalid_argument("balance: equal m-exponents, the term cannot be solved for m");
  return Scalar((term.n_exp - lhs.n_exp) / (lhs.m_exp - term.m_exp));
}

struct Balance {
  std::vector<Scalar> per_term;  // same order as the input terms
  Scalar max;
};

/// Solves lhs = term for every term and returns the largest exponent.
inline Balance balance_exponents(const PowerTerm& lhs, const std::vector<PowerTerm>& terms) {
  if (terms.empty()) throw std::invalid_argument("balance: no terms");
  Balance out;
  for (const PowerTerm& t : terms) out.per_term.push_back(balance_exponent(lhs, t));
  out.max = *std::max_element(out.per_term.begin(), out.per_term.end());
  return out;
}

/// Terms of k^{1/3}|Pi|^{2/3}|G|^{2/3} + k^{2/11}|Pi|^{6/11}|G|^{9/11} + k|Pi| + |G|
/// after substituting power-law bounds for k, |Pi| and |G| (log factors dropped).
inline std::vector<PowerTerm> incidence_terms(const PowerTerm& k, const PowerTerm& pi, const PowerTerm& gamma) {
  return {k.pow(make_scalar(1, 3)) * pi.pow(make_scalar(2, 3)) * gamma.pow(make_scalar(2, 3)),
          k.pow(make_scalar(2, 11)) * pi.pow(make_scalar(6, 11)) * gamma.pow(make_scalar(9, 11)),
          k * pi,
          gamma};
}

/// Drops every term dominated by another one on the whole range 1 <= m <= n.
/// For monomials it is enough to compare the exponents at both endpoints.
inline std::vector<PowerTerm> drop_subsumed(const std::vector<PowerTerm>& terms) {
  std::vector<PowerTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < terms.size() && !subsumed; ++j) {
      if (i == j) continue;
      // t_i <= t_j for all 1 <= m <= n iff both at m = 1 and at m = n.
      const bool at_one = terms[i].n_exp <= terms[j].n_exp;
      const bool at_n = terms[i].m_exp + terms[i].n_exp <= terms[j].m_exp + terms[j].n_exp;
      subsumed = at_one && at_n && !(terms[i] == terms[j]);
    }
    if (!subsumed) out.push_back(terms[i]);
  }
  return out;
}

/// The symbolic argument bounding the collinear count m for a point set of
/// size n with O(n) distinct distances of the given kind.
struct RichLineDerivation {
  PowerTerm multiplicity;             // bound on k
  std::vector<PowerTerm> raw_terms;   // incidence bound after substitution
  std::vector<PowerTerm> terms;       // after dropping subsumed terms
  PowerTerm lower;                    // |Q2| >= m^2 n
  Balance balance;
};

/// Builds the bound for the metric's distinct-distance problem:
///  * Euclidean: |A-A|^5 |A^2+B^2|^6 >~ |A|^11 |B|^3 with |A-A|, |A^2+B^2| = O(n)
///    and |A| = m bounds a vertical line's population, and k <= 2|B|.
///  * Rectangular: R(P)^11 >= R(A)^5 R(A,B)^6 >~ |A0|^11 |B0|^3 with R(P) = O(n),
///    and again k <= 2|B0|.
/// Then |Pi| = m^2, |Gamma| <= n^2 are substituted into the incidence bound
/// and balanced against |Q2| >= m^2 n.
inline RichLineDerivation rich_line_derivation(Metric metric) {
  const PowerTerm m = power_of_m(1);
  const PowerTerm n = power_of_n(1);
  PowerTerm numerator;
  if (metric == Metric::EuclideanSq) {
    const PowerTerm difference_set = n;  // |A-A| <= 2 D(A)
    const PowerTerm image_sumset = n;    // |A^2 + B^2| = D(A, B)
    numerator = difference_set.pow(5) * image_sumset.pow(6);
  } else if (metric == Metric::Rectangular) {
    const PowerTerm distinct_areas = n;  // R(P) = O(n)
    numerator = distinct_areas.pow(11);
  } else {
    throw std::invalid_argument("rich_line_derivation: unsupported metric");
  }
  // |B|^3 <= numerator / m^11.
  const PowerTerm b_side = (numerator / m.pow(11)).pow(make_scalar(1, 3));
  RichLineDerivation d;
  d.multiplicity = b_side;  // the factor 2 in k <= 2|B| is a constant
  d.raw_terms = incidence_terms(d.multiplicity, m.pow(2), n.pow(2));
  d.terms = drop_subsumed(d.raw_terms);
  d.lower = m.pow(2) * n;
  d.balance = balance_exponents(d.lower, d.terms);
  return d;
}

}  // namespace ddlab
