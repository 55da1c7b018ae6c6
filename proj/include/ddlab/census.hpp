#pragma once

// Quadruple census for a collinear set A inside P.
//
//   Q   = {(a, b, p, q) in A^2 x P^2 : d(p, a) = d(q, b)}
//   Q1  = quadruples whose (p, q) is degenerate: p_y^2 = q_y^2 (Euclidean,
//         A on the x-axis) or (p_y - k p_x)^2 = (q_y - k q_x)^2 (rectangular,
//         A on y = k x)
//   Q2  = Q \ Q1
//
// |Q| is read off the bipartite histogram as sum M_i^2. |Q1| is counted by
// solving, for every (a, b, p), for the few q that satisfy both the distance
// equation and the degeneracy condition; the solutions are checked exactly.

#include "ddlab/algebra.hpp"
#include "ddlab/distance_stats.hpp"
#include "ddlab/geometry.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddlab {

struct QuadrupleCensus {
  Metric metric = Metric::EuclideanSq;
  std::optional<Scalar> kappa;  // slope of the line carrying A (rectangular only)
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t q_total = 0;
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  DistanceProfile profile;  // the M_i histogram over A x P
  std::size_t max_partner_candidates = 0;  // largest exact solution set for q seen
};

namespace detail {

inline std::uint64_t sum_of_squares(const DistanceProfile& profile) {
  std::uint64_t s = 0;
  for (const auto& [v, c] : profile.histogram) s += c * c;
  return s;
}

inline void require_subset(const PointSet& a_side, const PointSet& points, const char* who) {
  if (a_side.empty()) throw std::invalid_argument(std::string(who) + ": A is empty");
  if (!a_side.is_subset_of(points)) throw std::invalid_argument(std::string(who) + ": A is not a subset of P");
}

inline void push_unique(std::vector<Point>& out, Point p) {
  for (const Point& e : out) {
    if (e == p) return;
  }
  out.push_back(std::move(p));
}

}  // namespace detail

/// All q with |q - b|^2 = |p - a|^2 and q_y^2 = p_y^2, for a, b on the x-axis.
/// Writing q_y = e with e^2 = p_y^2 and u = q_x - b_x, the distance equation
/// becomes u^2 = |p - a|^2 - e^2.
inline std::vector<Point> degenerate_partners_euclid(const Point& a, const Point& b, const Point& p) {
  const Scalar target = euclid_sq(p, a);
  std::vector<Point> out;
  for (const Scalar& e : {Scalar(p.y), Scalar(-p.y)}) {
    const auto roots = rational_roots(Scalar(1), Scalar(0), Scalar(e * e - target));
    for (const Scalar& u : *roots) detail::push_unique(out, Point(Scalar(b.x + u), e));
  }
  return out;
}

/// All q with R(q, t) = R(p, s) and (q_y - k q_x)^2 = (p_y - k p_x)^2, for s, t
/// on y = k x. With q_y = k q_x + e and u = q_x - t_x the first equation is
/// k u^2 + e u - R(p, s) = 0.
inline std::vector<Point> degenerate_partners_rect(const Point& s, const Point& t, const Point& p,
                                                   const Scalar& kappa) {
  const Scalar target = rect_dist(p, s);
  const Scalar d = p.y - kappa * p.x;
  std::vector<Point> out;
  for (const Scalar& e : {d, Scalar(-d)}) {
    const auto roots = rational_roots(kappa, e, Scalar(-target));
    for (const Scalar& u : *roots) {
      Scalar qx = t.x + u;
      Scalar qy = kappa * qx + e;
      detail::push_unique(out, Point(std::move(qx), std::move(qy)));
    }
  }
  return out;
}

namespace detail {

template <typename Partners, typename Verify>
void count_degenerate(QuadrupleCensus& census, const PointSet& a_side, const PointSet& points,
                      Partners&& partners, Verify&& verify) {
  for (const Point& a : a_side) {
    for (const Point& b : a_side) {
      for (const Point& p : points) {
        const std::vector<Point> candidates = partners(a, b, p);
        if (candidates.size() > 4) throw std::logic_error("census: more than four degenerate partners");
        census.max_partner_candidates = std::max(census.max_partner_candidates, candidates.size());
        for (const Point& q : candidates) {
          if (!verify(a, b, p, q)) throw std::logic_error("census: partner fails its defining equations");
          if (points.contains(q)) ++census.q1;
        }
      }
    }
  }
  if (census.q1 > census.q_total) throw std::logic_error("census: |Q1| exceeds |Q|");
  census.q2 = census.q_total - census.q1;
}

}  // namespace detail

/// Census for A on the x-axis (the caller moves the rich line there first).
inline QuadrupleCensus census_euclid(const PointSet& a_side, const PointSet& points) {
  detail::require_subset(a_side, points, "census_euclid");
  for (const Point& a : a_side) {
    if (sgn(a.y) != 0) throw std::invalid_argument("census_euclid: A is not on the x-axis");
  }
  QuadrupleCensus census;
  census.metric = Metric::EuclideanSq;
  census.m = a_side.size();
  census.n = points.size();
  census.profile = bipartite_distinct(a_side, points, Metric::EuclideanSq);
  census.q_total = detail::sum_of_squares(census.profile);
  detail::count_degenerate(
      census, a_side, points, degenerate_partners_euclid,
      [](const Point& a, const Point& b, const Point& p, const Point& q) {
        return euclid_sq(q, b) == euclid_sq(p, a) && q.y * q.y == p.y * p.y;
      });
  return census;
}

/// Census for A on the line y = kappa x through the origin, kappa != 0.
inline QuadrupleCensus census_rect(const PointSet& a_side, const PointSet& points, const Scalar& kappa) {
  if (sgn(kappa) == 0) throw std::invalid_argument("census_rect: kappa must be nonzero");
  detail::require_subset(a_side, points, "census_rect");
  for (const Point& a : a_side) {
    if (a.y != kappa * a.x) throw std::invalid_argument("census_rect: A is not on y = kappa x");
  }
  QuadrupleCensus census;
  census.metric = Metric::Rectangular;
  census.kappa = kappa;
  census.m = a_side.size();
  census.n = points.size();
  census.profile = bipartite_distinct(a_side, points, Metric::Rectangular);
  census.q_total = detail::sum_of_squares(census.profile);
  detail::count_degenerate(
      census, a_side, points,
      [&](const Point& s, const Point& t, const Point& p) { return degenerate_partners_rect(s, t, p, kappa); },
      [&](const Point& s, const Point& t, const Point& p, const Point& q) {
        const Scalar dp = p.y - kappa * p.x;
        const Scalar dq = q.y - kappa * q.x;
        return rect_dist(q, t) == rect_dist(p, s) && dq * dq == dp * dp;
      });
  return census;
}

// ---------------------------------------------------------------------------
// Moving a rich line into census position

struct AlignedInstance {
  PointSet a_side;  // P ∩ line, in the new frame
  PointSet points;  // all of P, in the new frame
  std::optional<Scalar> kappa;  // rectangular frames only
};

/// Similarity z -> conj(d) (z - o) with d the line's direction and o a point
/// of the line. It sends the line to the x-axis and multiplies every squared
/// Euclidean distance by |d|^2, so all equalities between distances (and
/// hence the census) are preserved while staying rational.
inline AlignedInstance align_to_x_axis(const PointSet& points, const CanonicalLine& line) {
  const PointSet on_line = points_on_line(points, line);
  if (on_line.empty()) throw std::invalid_argument("align_to_x_axis: no point of P on the line");
  const Point& o = on_line[0];
  const Scalar dx(line.b);
  const Scalar dy(-line.a);
  const auto map = [&](const Point& z) {
    const Scalar u = z.x - o.x;
    const Scalar v = z.y - o.y;
    return Point(Scalar(u * dx + v * dy), Scalar(v * dx - u * dy));
  };
  std::vector<Point> all, on;
  for (const Point& z : points) all.push_back(map(z));
  for (const Point& z : on_line) on.push_back(map(z));
  return {PointSet(std::move(on)), PointSet(std::move(all)), std::nullopt};
}

/// Translation taking a non-axis-parallel line through the origin, where it
/// reads y = kappa x. Rectangular distances are translation invariant.
inline AlignedInstance translate_through_origin(const PointSet& points, const CanonicalLine& line) {
  if (line.is_horizontal() || line.is_vertical()) {
    throw std::invalid_argument("translate_through_origin: line is axis-parallel");
  }
  const PointSet on_line = points_on_line(points, line);
  if (on_line.empty()) throw std::invalid_argument("translate_through_origin: no point of P on the line");
  const Point& o = on_line[0];
  const auto shift = [&](const Point& z) { return Point(Scalar(z.x - o.x), Scalar(z.y - o.y)); };
  std::vector<Point> all, on;
  for (const Point& z : points) all.push_back(shift(z));
  for (const Point& z : on_line) on.push_back(shift(z));
  // a x + b y = c  =>  y = -(a / b) x through the origin after the shift.
  return {PointSet(std::move(on)), PointSet(std::move(all)), make_scalar(Integer(-line.a), line.b)};
}

// ---------------------------------------------------------------------------
// Counting inequalities

struct CsBoundReport {
  Metric metric = Metric::EuclideanSq;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t q_total = 0;
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  std::size_t distinct = 0;  // D(A, P), resp. the rectangular analogue
  Integer cs_lhs;            // |Q| * D(A, P)
  Integer cs_rhs;            // m^2 n^2
  bool cauchy_schwarz = false;
  bool q1_bound = false;           // q1 <= 4 m^2 n
  bool few_distances = false;      // 5 D(A, P) <= n
  std::optional<bool> q2_bound;    // q2 >= m^2 n, evaluated only under few_distances

  /// True when no exact inequality failed. A failure here means a bug.
  [[nodiscard]] bool ok() const { return cauchy_schwarz && q1_bound && q2_bound.value_or(true); }
};

inline CsBoundReport cs_bound_report(const QuadrupleCensus& census, const DistanceProfile& profile) {
  if (profile.metric != census.metric || !profile.bipartite ||
      profile.total() != census.m * census.n || detail::sum_of_squares(profile) != census.q_total) {
    throw std::invalid_argument("cs_bound_report: census and profile come from different inputs");
  }
  CsBoundReport r;
  r.metric = census.metric;
  r.m = census.m;
  r.n = census.n;
  r.q_total = census.q_total;
  r.q1 = census.q1;
  r.q2 = census.q2;
  r.distinct = profile.distinct_count();
  const Integer mn = Integer(static_cast<unsigned long>(census.m)) * static_cast<unsigned long>(census.n);
  r.cs_lhs = Integer(static_cast<unsigned long>(census.q_total)) * static_cast<unsigned long>(r.distinct);
  r.cs_rhs = mn * mn;
  r.cauchy_schwarz = r.cs_lhs >= r.cs_rhs;
  const Integer m2n = mn * static_cast<unsigned long>(census.m);
  r.q1_bound = Integer(static_cast<unsigned long>(census.q1)) <= 4 * m2n;
  r.few_distances = 5 * r.distinct <= census.n;
  if (r.few_distances) r.q2_bound = Integer(static_cast<unsigned long>(census.q2)) >= m2n;
  return r;
}

inline nlohmann::json to_json(const CsBoundReport& r) {
  nlohmann::json flags;
  flags["cauchy_schwarz"] = r.cauchy_schwarz;
  flags["q1_le_4m2n"] = r.q1_bound;
  flags["distinct_le_n_over_5"] = r.few_distances;
  flags["q2_ge_m2n"] = r.q2_bound ? nlohmann::json(*r.q2_bound) : nlohmann::json(nullptr);
  return {{"metric", std::string(to_string(r.metric))},
          {"m", r.m},
          {"n", r.n},
          {"q_total", r.q_total},
          {"q1", r.q1},
          {"q2", r.q2},
          {"cs_lhs", r.cs_lhs.get_str()},
          {"cs_rhs", r.cs_rhs.get_str()},
          {"hypothesis_flags", flags}};
}

}  // namespace ddlab
