#pragma once

// Representation functions, E_k energies, convex-image sumsets and the
// verification routines built on them: the E_{1.5} / E_3 inequality, the
// Hölder chain, the shifted-convex curve family with its rich points, the
// dyadic re-summations and the convexity sumset ratio.
//
// Integer-valued quantities are exact. Fractional powers go through
// directed-rounding intervals with adaptive precision; an inequality is only
// reported as HOLDS when the enclosures certify it.

#include "ddlab/geometry.hpp"
#include "ddlab/interval.hpp"
#include "ddlab/report.hpp"
#include "ddlab/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace ddlab {

/// Finite set of rationals, sorted and without repeats.
using ScalarSet = std::vector<Scalar>;

inline ScalarSet make_set(std::vector<Scalar> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

inline ScalarSet make_set(std::initializer_list<long> values) {
  std::vector<Scalar> v;
  for (long x : values) v.emplace_back(x);
  return make_set(std::move(v));
}

inline std::string signature(const ScalarSet& set) {
  std::string s;
  for (const Scalar& x : set) {
    if (!s.empty()) s.push_back(',');
    s += to_string(x);
  }
  return s;
}

inline Integer to_integer(std::size_t v) { return Integer(static_cast<unsigned long>(v)); }

// ---------------------------------------------------------------------------
// Representation function and energies

struct RepProfile {
  ScalarSet a;
  ScalarSet b;
  std::map<Scalar, std::uint64_t> rep;  // x -> r_{A-B}(x); keys form A - B

  [[nodiscard]] std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [x, r] : rep) s += r;
    return s;
  }
  [[nodiscard]] std::uint64_t at(const Scalar& x) const {
    const auto it = rep.find(x);
    return it == rep.end() ? 0 : it->second;
  }
};

inline RepProfile rep_function(const ScalarSet& a, const ScalarSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("rep_function: empty set");
  std::unordered_map<Scalar, std::uint64_t, ScalarHash> counts;
  for (const Scalar& x : a) {
    for (const Scalar& y : b) ++counts[Scalar(x - y)];
  }
  RepProfile out{a, b, {}};
  for (auto& [x, r] : counts) out.rep.emplace(x, r);
  return out;
}

inline ScalarSet difference_set(const ScalarSet& a, const ScalarSet& b) {
  ScalarSet out;
  for (const auto& [x, r] : rep_function(a, b).rep) out.push_back(x);
  return out;
}

/// sum_x r(x)^k for a positive integer k.
inline Integer energy_exact(const RepProfile& profile, unsigned long k) {
  if (k == 0) throw std::invalid_argument("energy: k must be positive");
  Integer sum = 0;
  Integer term;
  for (const auto& [x, r] : profile.rep) {
    mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(r), k);
    sum += term;
  }
  return sum;
}

/// sum_x r(x)^k as an enclosure, k a positive rational. k = 3/2 is taken as
/// r * sqrt(r) per term.
inline Interval energy_interval(const RepProfile& profile, const Scalar& k, mpfr_prec_t prec) {
  if (sgn(k) <= 0) throw std::invalid_argument("energy: k must be positive");
  const bool three_halves = k == make_scalar(3, 2);
  Interval sum(prec);
  for (const auto& [x, r] : profile.rep) {
    const Interval v = Interval::from_integer(Integer(static_cast<unsigned long>(r)), prec);
    sum = sum + (three_halves ? v * v.sqrt() : v.pow(k));
  }
  return sum;
}

using EnergyValue = std::variant<Integer, Interval>;

/// E_k(A, B) with B defaulting to A: exact for integer k, an enclosure otherwise.
inline EnergyValue energy(const ScalarSet& a, const std::optional<ScalarSet>& b, const Scalar& k,
                          mpfr_prec_t prec = 128) {
  if (sgn(k) <= 0) throw std::invalid_argument("energy: k must be positive");
  const RepProfile profile = rep_function(a, b.value_or(a));
  if (is_integer(k) && k.get_num().fits_ulong_p()) return energy_exact(profile, k.get_num().get_ui());
  return energy_interval(profile, k, prec);
}

// ---------------------------------------------------------------------------
// Convex quadratics

/// f(x) = a x^2 + b x + c with a != 0, tagged by how it was built.
class ConvexFn {
 public:
  enum class Kind { Square, Quad, Quadratic };

  static ConvexFn square() { return ConvexFn(Kind::Square, 1, 0, 0); }
  /// kappa x^2 - c x.
  static ConvexFn quad(const Scalar& kappa, const Scalar& c) {
    return ConvexFn(Kind::Quad, kappa, Scalar(-c), 0);
  }
  static ConvexFn quadratic(const Scalar& a, const Scalar& b, const Scalar& c) {
    return ConvexFn(Kind::Quadratic, a, b, c);
  }

  [[nodiscard]] Scalar operator()(const Scalar& x) const { return Scalar((a_ * x + b_) * x + c_); }
  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const Scalar& leading() const noexcept { return a_; }
  [[nodiscard]] const Scalar& linear() const noexcept { return b_; }
  [[nodiscard]] const Scalar& constant() const noexcept { return c_; }

  [[nodiscard]] std::string describe() const {
    switch (kind_) {
      case Kind::Square: return "square";
      case Kind::Quad: return "quad(" + to_display(a_) + "," + to_display(Scalar(-b_)) + ")";
      case Kind::Quadratic: return "quadratic(" + to_display(a_) + "," + to_display(b_) + "," + to_display(c_) + ")";
    }
    return "?";
  }

 private:
  ConvexFn(Kind kind, Scalar a, Scalar b, Scalar c)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (sgn(a_) == 0) throw std::invalid_argument("ConvexFn: leading coefficient must be nonzero");
  }

  Kind kind_;
  Scalar a_;
  Scalar b_;
  Scalar c_;
};

enum class SumOp { Plus, Minus };

/// {f(u) + v} or {f(u) - v}.
inline ScalarSet sumset_image(const ConvexFn& f, const ScalarSet& u, const ScalarSet& v, SumOp op = SumOp::Plus) {
  std::vector<Scalar> out;
  out.reserve(u.size() * v.size());
  for (const Scalar& x : u) {
    const Scalar fx = f(x);
    for (const Scalar& y : v) out.emplace_back(op == SumOp::Plus ? Scalar(fx + y) : Scalar(fx - y));
  }
  return make_set(std::move(out));
}

// ---------------------------------------------------------------------------
// E_{1.5} / E_3 inequality and the Hölder chain

inline CheckReport li_inequality_check(const ScalarSet& a, const ScalarSet& b, unsigned cap_bits = 1024,
                                       unsigned start_bits = 64) {
  const RepProfile rep_a = rep_function(a, a);
  const Integer e3_a = energy_exact(rep_a, 3);
  const Integer e3_b = energy_exact(rep_function(b, b), 3);
  const Integer e_mixed = energy_exact(rep_function(a, difference_set(a, b)), 2);
  const Integer b_sq = to_integer(b.size()) * to_integer(b.size());

  const auto sides = [&](mpfr_prec_t prec) {
    const Interval e15 = energy_interval(rep_a, make_scalar(3, 2), prec);
    Interval lhs = e15 * e15 * Interval::from_integer(b_sq, prec);
    Interval rhs = Interval::from_integer(e3_a, prec).pow(make_scalar(2, 3)) *
                   Interval::from_integer(e3_b, prec).pow(make_scalar(1, 3)) *
                   Interval::from_integer(e_mixed, prec);
    return std::pair{std::move(lhs), std::move(rhs)};
  };
  const CertifiedComparison cmp = certify_le(sides, start_bits, cap_bits);

  CheckReport r;
  r.check = "li_inequality";
  r.n = a.size();
  r.m = b.size();
  r.instance_digest = digest("li|" + signature(a) + "|" + signature(b));
  r.lhs = "[" + cmp.lhs.lower_str() + "," + cmp.lhs.upper_str() + "]";
  r.set_rhs(cmp.rhs);
  r.verdict = cmp.verdict;
  r.precision_bits = cmp.precision_bits;
  r.details["E3_A"] = e3_a.get_str();
  r.details["E3_B"] = e3_b.get_str();
  r.details["E_A_AminusB"] = e_mixed.get_str();
  return r;
}

struct HolderChainReport {
  CheckReport integer_chain;  // |U|^8 <= E_3(U) E(U, U-U) |U-U|
  CheckReport holder;         // |U|^6 <= E_{1.5}(U)^2 |U-U|
  double slack = 0.0;         // integer_chain rhs / lhs

  [[nodiscard]] bool ok() const { return !integer_chain.failed() && !holder.failed(); }
};

inline HolderChainReport holder_chain_check(const ScalarSet& u, unsigned cap_bits = 1024) {
  if (u.empty()) throw std::invalid_argument("holder_chain_check: empty set");
  const RepProfile rep = rep_function(u, u);
  const ScalarSet diff = difference_set(u, u);
  const Integer size = to_integer(u.size());
  const Integer diff_size = to_integer(diff.size());
  const Integer e3 = energy_exact(rep, 3);
  const Integer e_mixed = energy_exact(rep_function(u, diff), 2);
  Integer lhs8;
  mpz_pow_ui(lhs8.get_mpz_t(), size.get_mpz_t(), 8);
  const Integer rhs8 = e3 * e_mixed * diff_size;
  const std::string sig = digest("holder|" + signature(u));

  HolderChainReport out;
  out.integer_chain.check = "holder_chain_integer";
  out.integer_chain.n = u.size();
  out.integer_chain.instance_digest = sig;
  out.integer_chain.set_exact(lhs8.get_str(), rhs8.get_str(), lhs8 <= rhs8);
  out.integer_chain.details["E3"] = e3.get_str();
  out.integer_chain.details["E_U_UminusU"] = e_mixed.get_str();
  out.integer_chain.details["diff_size"] = diff_size.get_str();
  out.slack = Scalar(rhs8, lhs8).get_d();

  Integer lhs6;
  mpz_pow_ui(lhs6.get_mpz_t(), size.get_mpz_t(), 6);
  const auto sides = [&](mpfr_prec_t prec) {
    const Interval e15 = energy_interval(rep, make_scalar(3, 2), prec);
    return std::pair{Interval::from_integer(lhs6, prec), e15 * e15 * Interval::from_integer(diff_size, prec)};
  };
  const CertifiedComparison cmp = certify_le(sides, 64, cap_bits);
  out.holder.check = "holder_e15";
  out.holder.n = u.size();
  out.holder.instance_digest = sig;
  out.holder.lhs = lhs6.get_str();
  out.holder.set_rhs(cmp.rhs);
  out.holder.verdict = cmp.verdict;
  out.holder.precision_bits = cmp.precision_bits;
  return out;
}

// ---------------------------------------------------------------------------
// Shifted convex curves y = -f(x + b) + s

struct ShiftCurve {
  Scalar s;
  Scalar b;

  friend bool operator==(const ShiftCurve& l, const ShiftCurve& r) { return l.s == r.s && l.b == r.b; }
};

struct ShiftFamily {
  ConvexFn f = ConvexFn::square();
  std::vector<ShiftCurve> curves;

  [[nodiscard]] Scalar eval(const ShiftCurve& l, const Scalar& x) const { return Scalar(l.s - f(Scalar(x + l.b))); }
  [[nodiscard]] bool contains(const ShiftCurve& l, const Point& p) const { return eval(l, p.x) == p.y; }
};

/// L = { l_{s,b} : (s, b) in (f(A) + C) x B }.
inline ShiftFamily convex_curve_family(const ConvexFn& f, const ScalarSet& a, const ScalarSet& b, const ScalarSet& c) {
  ShiftFamily family{f, {}};
  const ScalarSet shifts = sumset_image(f, a, c, SumOp::Plus);
  family.curves.reserve(shifts.size() * b.size());
  for (const Scalar& s : shifts) {
    for (const Scalar& shift : b) family.curves.push_back({s, shift});
  }
  return family;
}

/// The common point of two curves of the family, if any. With b == b' the
/// curves are vertical translates and never meet; otherwise
/// f(x + b') - f(x + b) + s - s' is affine in x with nonzero slope, so there
/// is exactly one crossing.
inline std::optional<Point> intersect(const ShiftFamily& family, const ShiftCurve& l1, const ShiftCurve& l2) {
  if (l1 == l2) throw std::invalid_argument("intersect: identical curves");
  if (l1.b == l2.b) return std::nullopt;
  const ConvexFn& f = family.f;
  const Scalar db = l2.b - l1.b;
  // (b' - b) [2 a x + a (b + b') + beta] + s - s' = 0
  Scalar x = ((l2.s - l1.s) / db - f.leading() * (l1.b + l2.b) - f.linear()) / (2 * f.leading());
  Scalar y = family.eval(l1, x);
  return Point(std::move(x), std::move(y));
}

struct PseudoLineReport {
  std::uint64_t pairs_checked = 0;
  std::uint64_t disjoint = 0;
  std::uint64_t single = 0;
  std::uint64_t failures = 0;  // crossing not on both curves

  [[nodiscard]] bool ok() const { return failures == 0; }
};

/// Verifies the at-most-one-crossing property: every pair when there are at
/// most `sample` pairs, else `sample` seeded random pairs.
inline PseudoLineReport pseudo_line_check(const ShiftFamily& family, std::uint64_t sample, std::uint64_t seed = 0) {
  PseudoLineReport r;
  const auto check = [&](const ShiftCurve& l1, const ShiftCurve& l2) {
    ++r.pairs_checked;
    const auto p = intersect(family, l1, l2);
    if (!p) {
      // Disjointness: same shape, different offset.
      if (l1.b != l2.b || l1.s == l2.s) ++r.failures; else ++r.disjoint;
      return;
    }
    if (!family.contains(l1, *p) || !family.contains(l2, *p)) {
      ++r.failures;
    } else {
      ++r.single;
    }
  };
  const std::uint64_t n = family.curves.size();
  const std::uint64_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (all_pairs <= sample) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) check(family.curves[i], family.curves[j]);
    }
    return r;
  }
  Rng rng(seed);
  for (std::uint64_t k = 0; k < sample; ++k) {
    const auto i = static_cast<std::size_t>(rng.below(n));
    auto j = static_cast<std::size_t>(rng.below(n - 1));
    if (j >= i) ++j;
    check(family.curves[i], family.curves[j]);
  }
  return r;
}

struct RichPoint {
  Point point;
  std::uint64_t incident = 0;
};

/// P_t: points on at least t curves of the family, sorted by point. Every
/// pairwise crossing is enumerated; a point's incidence count is taken when
/// it is first met from its lowest-index curve, where it equals one plus the
/// number of later curves through it.
inline std::vector<RichPoint> rich_points(const ShiftFamily& family, std::uint64_t t) {
  if (t < 2) throw std::invalid_argument("rich_points: t must be at least 2");
  std::vector<RichPoint> out;
  const std::size_t n = family.curves.size();
  if (t > n) return out;
  std::unordered_set<Point, PointHash> settled;
  std::unordered_map<Point, std::uint64_t, PointHash> local;
  for (std::size_t i = 0; i < n; ++i) {
    local.clear();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (auto p = intersect(family, family.curves[i], family.curves[j])) ++local[std::move(*p)];
    }
    for (auto& [p, later] : local) {
      if (!settled.insert(p).second) continue;
      if (later + 1 >= t) out.push_back({p, later + 1});
    }
  }
  std::sort(out.begin(), out.end(), [](const RichPoint& l, const RichPoint& r) { return l.point < r.point; });
  return out;
}

/// |C| * |{x : r_{A-B}(x) >= t}| <= |P_t(L)|, with the pointwise containment
/// (x, c) in P_t checked as well.
inline CheckReport rich_containment_check(const ConvexFn& f, const ScalarSet& a, const ScalarSet& b,
                                          const ScalarSet& c, std::uint64_t t) {
  if (t < 2 || t > std::min(a.size(), b.size())) {
    throw std::invalid_argument("rich_containment_check: need 2 <= t <= min(|A|, |B|)");
  }
  if (c.empty()) throw std::invalid_argument("rich_containment_check: C is empty");
  const RepProfile rep = rep_function(a, b);
  std::vector<Scalar> popular;
  for (const auto& [x, r] : rep.rep) {
    if (r >= t) popular.push_back(x);
  }
  const ShiftFamily family = convex_curve_family(f, a, b, c);
  const std::vector<RichPoint> rich = rich_points(family, t);
  std::unordered_set<Point, PointHash> rich_set;
  for (const RichPoint& rp : rich) rich_set.insert(rp.point);
  std::uint64_t missing = 0;
  for (const Scalar& x : popular) {
    for (const Scalar& y : c) {
      if (rich_set.count(Point(x, y)) == 0) ++missing;
    }
  }
  const Integer lhs = to_integer(c.size()) * to_integer(popular.size());
  const Integer rhs = to_integer(rich.size());

  CheckReport r;
  r.check = "rich_containment";
  r.n = family.curves.size();
  r.m = t;
  r.instance_digest =
      digest("rich|" + f.describe() + "|" + signature(a) + "|" + signature(b) + "|" + signature(c) + "|" + std::to_string(t));
  r.set_exact(lhs.get_str(), rhs.get_str(), lhs <= rhs && missing == 0);
  r.details["popular_differences"] = popular.size();
  r.details["missing_rich_points"] = missing;
  r.details["curves"] = family.curves.size();
  // Measured |P_t| t^3 / |L|^2 (the rich-point bound's constant is unspecified).
  const double l = static_cast<double>(family.curves.size());
  r.details["rich_ratio"] = l > 0 ? static_cast<double>(rich.size()) * static_cast<double>(t * t * t) / (l * l) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Dyadic decompositions

struct DyadicBand {
  std::int64_t j = 0;  // -1 marks the "below threshold" piece
  std::uint64_t members = 0;
  Integer sum;
};

struct DyadicReport {
  std::vector<DyadicBand> e3_bands;  // 2^j <= r < 2^{j+1}, summing r^3
  Integer e3;
  bool e3_identity = false;

  std::optional<Scalar> delta_sq;         // threshold used for E(A, F), squared
  std::vector<DyadicBand> pair_bands;     // r < delta, then 2^j delta <= r < 2^{j+1} delta, summing r^2
  std::optional<Integer> pair_energy;
  std::optional<bool> pair_identity;

  std::optional<Interval> delta_star;     // |f(A)+C| |F|^{1/2} / (|A|^{1/2} |C|^{1/2})
  std::optional<bool> delta_star_ge_one;  // decided exactly through the square

  [[nodiscard]] bool ok() const {
    return e3_identity && pair_identity.value_or(true) && delta_star_ge_one.value_or(true);
  }
};

struct ThresholdInputs {
  ConvexFn f;
  ScalarSet c;
};

namespace detail {

inline std::int64_t floor_log2(std::uint64_t r) {
  std::int64_t j = -1;
  while (r > 0) {
    r >>= 1;
    ++j;
  }
  return j;
}

}  // namespace detail

/// Re-sums E_3(A) over dyadic bands of r_{A-A} and, when F is given, E(A, F)
/// over the threshold split at delta. delta defaults to 1, or to the balancing
/// threshold when `threshold` is supplied.
inline DyadicReport dyadic_decomposition_check(const ScalarSet& a, const std::optional<ScalarSet>& f_set = std::nullopt,
                                               const std::optional<Scalar>& delta = std::nullopt,
                                               const std::optional<ThresholdInputs>& threshold = std::nullopt,
                                               mpfr_prec_t prec = 128) {
  if (a.empty()) throw std::invalid_argument("dyadic_decomposition_check: empty set");
  if (delta && *delta < 1) throw std::invalid_argument("dyadic_decomposition_check: delta must be at least 1");
  DyadicReport out;
  const RepProfile rep = rep_function(a, a);
  out.e3 = energy_exact(rep, 3);
  std::map<std::int64_t, DyadicBand> bands;
  for (const auto& [x, r] : rep.rep) {
    const std::int64_t j = detail::floor_log2(r);
    auto& band = bands[j];
    band.j = j;
    ++band.members;
    band.sum += Integer(static_cast<unsigned long>(r)) * r * r;
  }
  Integer resummed = 0;
  for (auto& [j, band] : bands) {
    resummed += band.sum;
    out.e3_bands.push_back(std::move(band));
  }
  out.e3_identity = resummed == out.e3;

  if (threshold && f_set) {
    // delta*^2 = |f(A)+C|^2 |F| / (|A| |C|), exact.
    const Integer image = to_integer(sumset_image(threshold->f, a, threshold->c).size());
    const Scalar dsq = make_scalar(Integer(image * image * to_integer(f_set->size())),
                                   Integer(to_integer(a.size()) * to_integer(threshold->c.size())));
    out.delta_star = Interval::from_scalar(dsq, prec).sqrt();
    out.delta_star_ge_one = dsq >= 1;
    if (!delta) out.delta_sq = dsq;
  }
  if (delta) out.delta_sq = Scalar(*delta * *delta);

  if (f_set) {
    if (!out.delta_sq) out.delta_sq = Scalar(1);
    const Scalar& dsq = *out.delta_sq;
    const RepProfile pair = rep_function(a, *f_set);
    out.pair_energy = energy_exact(pair, 2);
    std::map<std::int64_t, DyadicBand> split;
    const Scalar size_sq = Scalar(to_integer(a.size()) * to_integer(a.size()));
    for (const auto& [x, r] : pair.rep) {
      const Scalar r_sq = Scalar(to_integer(r) * to_integer(r));
      std::int64_t j = -1;
      if (r_sq >= dsq) {
        // Largest j with 4^j delta^2 <= r^2.
        j = 0;
        Scalar bound = dsq * 4;
        while (bound <= r_sq) {
          bound *= 4;
          ++j;
        }
        if (dsq * Scalar(Integer(1) << static_cast<mp_bitcnt_t>(2 * j)) > size_sq) {
          throw std::logic_error("dyadic split: band beyond floor(log2(|A|/delta))");
        }
      }
      auto& band = split[j];
      band.j = j;
      ++band.members;
      band.sum += to_integer(r) * to_integer(r);
    }
    Integer total = 0;
    for (auto& [j, band] : split) {
      total += band.sum;
      out.pair_bands.push_back(std::move(band));
    }
    out.pair_identity = total == *out.pair_energy;
  }
  return out;
}

inline nlohmann::json to_json(const DyadicReport& r) {
  const auto bands = [](const std::vector<DyadicBand>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const DyadicBand& b : v) arr.push_back({{"j", b.j}, {"members", b.members}, {"sum", b.sum.get_str()}});
    return arr;
  };
  nlohmann::json j = {{"e3", r.e3.get_str()}, {"e3_bands", bands(r.e3_bands)}, {"e3_identity", r.e3_identity}};
  if (r.delta_sq) j["delta_squared"] = to_string(*r.delta_sq);
  if (r.pair_energy) {
    j["pair_energy"] = r.pair_energy->get_str();
    j["pair_bands"] = bands(r.pair_bands);
    j["pair_identity"] = *r.pair_identity;
  }
  if (r.delta_star) {
    j["delta_star"] = nlohmann::json::array({r.delta_star->lower_str(), r.delta_star->upper_str()});
    j["delta_star_ge_one"] = *r.delta_star_ge_one;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Convexity sumset ratio

/// |U-U|^5 |f(U)+V|^6 against |U|^11 |V|^3 / ln^2 |U|; reports the ratio,
/// which estimates the unspecified constant. No verdict beyond MEASURED.
inline CheckReport lr_ratio_report(const ConvexFn& f, const ScalarSet& u, const ScalarSet& v, mpfr_prec_t prec = 128) {
  if (u.size() < 2) throw std::invalid_argument("lr_ratio_report: need |U| >= 2");
  if (v.empty()) throw std::invalid_argument("lr_ratio_report: V is empty");
  const Integer diff = to_integer(difference_set(u, u).size());
  const Integer image = to_integer(sumset_image(f, u, v).size());
  Integer d5, i6, u11, v3;
  mpz_pow_ui(d5.get_mpz_t(), diff.get_mpz_t(), 5);
  mpz_pow_ui(i6.get_mpz_t(), image.get_mpz_t(), 6);
  mpz_pow_ui(u11.get_mpz_t(), to_integer(u.size()).get_mpz_t(), 11);
  mpz_pow_ui(v3.get_mpz_t(), to_integer(v.size()).get_mpz_t(), 3);
  const Integer lhs = d5 * i6;
  const Interval log_u = Interval::from_integer(to_integer(u.size()), prec).log();
  const Interval rhs = Interval::from_integer(Integer(u11 * v3), prec) / (log_u * log_u);
  const Interval ratio = Interval::from_integer(lhs, prec) / rhs;

  CheckReport r;
  r.check = "lr_ratio";
  r.n = u.size();
  r.m = v.size();
  r.instance_digest = digest("lr|" + f.describe() + "|" + signature(u) + "|" + signature(v));
  r.lhs = lhs.get_str();
  r.set_rhs(rhs);
  r.verdict = Verdict::Measured;
  r.precision_bits = static_cast<unsigned>(prec);
  r.details["ratio"] = nlohmann::json::array({ratio.lower_str(12), ratio.upper_str(12)});
  r.details["ratio_mid"] = ratio.mid_double();
  r.details["diff_size"] = diff.get_str();
  r.details["image_size"] = image.get_str();
  r.details["log"] = "natural";
  return r;
}

}  // namespace ddlab
