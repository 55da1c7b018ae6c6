#pragma once

// Brute-force references for the test suites. Nothing here reuses the
// library's counting paths: quadruples are enumerated directly, incidences
// come from the distance equation rather than from curve keys, and curve
// intersections are solved by eliminating the other variable.

#include "ddlab/energy.hpp"
#include "ddlab/geometry.hpp"
#include "ddlab/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using ddlab::Metric;
using ddlab::Point;
using ddlab::PointSet;
using ddlab::Scalar;

inline Scalar dist(Metric m, const Point& p, const Point& q) {
  const Scalar dx = p.x - q.x;
  const Scalar dy = p.y - q.y;
  switch (m) {
    case Metric::EuclideanSq: return dx * dx + dy * dy;
    case Metric::Rectangular: return dx * dy;
    case Metric::MinkowskiSq: return dx * dx - dy * dy;
  }
  return 0;
}

/// Distinct values over unordered pairs of distinct points.
inline std::size_t distinct(const PointSet& p, Metric m, bool count_zero = true) {
  std::set<Scalar> values;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      Scalar v = dist(m, p[i], p[j]);
      if (!count_zero && sgn(v) == 0) continue;
      values.insert(v);
    }
  }
  return values.size();
}

/// Largest |P ∩ l| by checking every point against every pair's line.
inline std::size_t line_richness(const PointSet& p, bool exclude_axis_parallel) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Scalar dx = p[j].x - p[i].x;
      const Scalar dy = p[j].y - p[i].y;
      if (exclude_axis_parallel && (sgn(dx) == 0 || sgn(dy) == 0)) continue;
      std::size_t on = 0;
      for (const Point& r : p) {
        if ((r.x - p[i].x) * dy == (r.y - p[i].y) * dx) ++on;
      }
      best = std::max(best, on);
    }
  }
  return best;
}

struct QuadCount {
  std::uint64_t total = 0;
  std::uint64_t degenerate = 0;
};

/// Degeneracy of (p, q): p_y^2 = q_y^2 (Euclidean, A on the x-axis) or
/// (p_y - k p_x)^2 = (q_y - k q_x)^2 (rectangular, A on y = k x).
inline bool degenerate(Metric m, const Point& p, const Point& q, const std::optional<Scalar>& kappa) {
  if (m == Metric::EuclideanSq) return p.y * p.y == q.y * q.y;
  const Scalar dp = p.y - *kappa * p.x;
  const Scalar dq = q.y - *kappa * q.x;
  return dp * dp == dq * dq;
}

/// Every (a, b, p, q) in A^2 x P^2 with d(p, a) = d(q, b).
inline QuadCount quadruples(const PointSet& a, const PointSet& p, Metric m,
                            const std::optional<Scalar>& kappa = std::nullopt) {
  QuadCount out;
  for (const Point& x : a) {
    for (const Point& y : a) {
      for (const Point& u : p) {
        const Scalar d = dist(m, u, x);
        for (const Point& v : p) {
          if (dist(m, v, y) != d) continue;
          ++out.total;
          if (degenerate(m, u, v, kappa)) ++out.degenerate;
        }
      }
    }
  }
  return out;
}

/// Incidences between Pi = A0 x A0 and the curves of non-degenerate (p, q),
/// straight from the definition: (a, b) lies on the curve of (p, q) iff the
/// two distances agree.
inline std::uint64_t incidences(const PointSet& a, const PointSet& p, Metric m,
                                const std::optional<Scalar>& kappa = std::nullopt) {
  std::uint64_t out = 0;
  for (const Point& u : p) {
    for (const Point& v : p) {
      if (degenerate(m, u, v, kappa)) continue;
      for (const Point& x : a) {
        for (const Point& y : a) {
          if (dist(m, u, x) == dist(m, v, y)) ++out;
        }
      }
    }
  }
  return out;
}

/// Real roots of c2 t^2 + c1 t + c0, not identically zero.
inline int root_count(const Scalar& c2, const Scalar& c1, const Scalar& c0) {
  if (sgn(c2) == 0) return sgn(c1) != 0 ? 1 : 0;
  const Scalar disc = c1 * c1 - 4 * c2 * c0;
  return sgn(disc) > 0 ? 2 : sgn(disc) == 0 ? 1 : 0;
}

/// Common points of (x - cx)^2 - (y - cy)^2 = c for two curves, eliminating
/// x (the library eliminates y). nullopt when the curves coincide.
inline std::optional<int> common_points(const Scalar& cx1, const Scalar& cy1, const Scalar& c1, const Scalar& cx2,
                                        const Scalar& cy2, const Scalar& c2) {
  // Difference: alpha x + beta y + gamma = 0.
  const Scalar alpha = 2 * (cx2 - cx1);
  const Scalar beta = 2 * (cy1 - cy2);
  const Scalar gamma = (cx1 * cx1 - cy1 * cy1 - c1) - (cx2 * cx2 - cy2 * cy2 - c2);
  if (sgn(alpha) == 0 && sgn(beta) == 0) {
    if (sgn(gamma) == 0) return std::nullopt;
    return 0;
  }
  if (sgn(alpha) == 0) {
    // y fixed; quadratic in x.
    const Scalar y = -gamma / beta;
    const Scalar v = y - cy1;
    return root_count(Scalar(1), Scalar(-2 * cx1), Scalar(cx1 * cx1 - v * v - c1));
  }
  // x = mu y + nu, then (mu y + nu - cx1)^2 - (y - cy1)^2 - c1 = 0.
  const Scalar mu = -beta / alpha;
  const Scalar nu = -gamma / alpha - cx1;
  return root_count(Scalar(mu * mu - 1), Scalar(2 * mu * nu + 2 * cy1), Scalar(nu * nu - cy1 * cy1 - c1));
}

/// The x where two shifted curves y = s - f(x + b) meet, found by evaluating
/// their difference at 0 and 1 (it is affine in x).
inline std::optional<Scalar> crossing(const ddlab::ConvexFn& f, const Scalar& s1, const Scalar& b1, const Scalar& s2,
                                      const Scalar& b2) {
  const auto h = [&](const Scalar& x) { return Scalar((s1 - f(Scalar(x + b1))) - (s2 - f(Scalar(x + b2)))); };
  const Scalar h0 = h(Scalar(0));
  const Scalar slope = h(Scalar(1)) - h0;
  if (sgn(slope) == 0) return std::nullopt;
  return Scalar(-h0 / slope);
}

/// r_{A-B} by direct pair enumeration.
inline std::map<Scalar, std::uint64_t> rep(const ddlab::ScalarSet& a, const ddlab::ScalarSet& b) {
  std::map<Scalar, std::uint64_t> out;
  for (const Scalar& x : a) {
    for (const Scalar& y : b) ++out[Scalar(x - y)];
  }
  return out;
}

/// Solutions of a - b = c - d in A^4.
inline std::uint64_t additive_quadruples(const ddlab::ScalarSet& a) {
  std::uint64_t count = 0;
  for (const Scalar& w : a) {
    for (const Scalar& x : a) {
      for (const Scalar& y : a) {
        for (const Scalar& z : a) {
          if (w - x == y - z) ++count;
        }
      }
    }
  }
  return count;
}

/// Solutions of a1 - b1 = a2 - b2 = a3 - b3 in A^6.
inline std::uint64_t energy3(const ddlab::ScalarSet& a) {
  std::uint64_t count = 0;
  for (const Scalar& a1 : a) {
    for (const Scalar& b1 : a) {
      const Scalar d = a1 - b1;
      std::uint64_t pairs = 0;
      for (const Scalar& a2 : a) {
        for (const Scalar& b2 : a) {
          if (a2 - b2 == d) ++pairs;
        }
      }
      count += pairs * pairs;
    }
  }
  return count;
}

inline std::uint64_t products(std::uint64_t a, std::uint64_t b) {
  std::set<std::uint64_t> out;
  for (std::uint64_t i = 1; i <= a; ++i) {
    for (std::uint64_t j = 1; j <= b; ++j) out.insert(i * j);
  }
  return out.size();
}

// Random instances ---------------------------------------------------------

inline Point random_point(ddlab::Rng& rng, long bound) {
  return Point(rng.between(-bound, bound), rng.between(-bound, bound));
}

/// n distinct points in [-bound, bound]^2 that include `forced`.
inline PointSet random_points_with(ddlab::Rng& rng, std::size_t n, long bound, const std::vector<Point>& forced) {
  std::set<Point> pts(forced.begin(), forced.end());
  while (pts.size() < n) pts.insert(random_point(rng, bound));
  return PointSet(std::vector<Point>(pts.begin(), pts.end()));
}

inline ddlab::ScalarSet random_scalars(ddlab::Rng& rng, std::size_t max_size, long bound) {
  const std::size_t size = 1 + static_cast<std::size_t>(rng.below(max_size));
  std::vector<Scalar> v;
  while (ddlab::make_set(v).size() < size) v.emplace_back(rng.between(-bound, bound));
  return ddlab::make_set(std::move(v));
}

}  // namespace oracle
