#pragma once

// Points, deduplicated point sets, canonical lines and the three planar
// "distance" forms (squared Euclidean, rectangular, squared Minkowski).

#include "ddlab/scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ddlab {

struct Point {
  Scalar x;
  Scalar y;

  Point() = default;
  Point(Scalar px, Scalar py) : x(std::move(px)), y(std::move(py)) {}
  Point(long px, long py) : x(px), y(py) {}

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    const int cx = cmp(a.x, b.x);
    return cx < 0 || (cx == 0 && a.y < b.y);
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    const std::size_t h = ScalarHash{}(p.x);
    return h ^ (ScalarHash{}(p.y) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
  }
};

inline std::string to_display(const Point& p) {
  return "(" + to_display(p.x) + "," + to_display(p.y) + ")";
}

/// A finite planar point set without duplicates, iterated in lexicographic
/// (x, y) order. Construction sorts and silently drops repeated points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points) : points_(std::move(points)) { normalize(); }
  PointSet(std::initializer_list<Point> points) : points_(points) { normalize(); }

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] auto begin() const noexcept { return points_.cbegin(); }
  [[nodiscard]] auto end() const noexcept { return points_.cend(); }
  [[nodiscard]] std::span<const Point> points() const noexcept { return points_; }

  [[nodiscard]] bool contains(const Point& p) const {
    return std::binary_search(points_.begin(), points_.end(), p);
  }

  [[nodiscard]] bool is_subset_of(const PointSet& other) const {
    return std::includes(other.points_.begin(), other.points_.end(), points_.begin(),
                         points_.end());
  }

  friend bool operator==(const PointSet& a, const PointSet& b) { return a.points_ == b.points_; }

 private:
  void normalize() {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  std::vector<Point> points_;
};

// ---------------------------------------------------------------------------
// Distance forms

enum class Metric { EuclideanSq, Rectangular, MinkowskiSq };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::EuclideanSq: return "euclidean-squared";
    case Metric::Rectangular: return "rectangular";
    case Metric::MinkowskiSq: return "minkowski-squared";
  }
  return "unknown";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "euclidean-squared" || name == "euclidean") return Metric::EuclideanSq;
  if (name == "rectangular") return Metric::Rectangular;
  if (name == "minkowski-squared" || name == "minkowski") return Metric::MinkowskiSq;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

inline Scalar euclid_sq(const Point& p, const Point& q) {
  const Scalar dx = p.x - q.x;
  const Scalar dy = p.y - q.y;
  return dx * dx + dy * dy;
}

/// Signed area of the axis-parallel rectangle spanned by p and q:
/// positive for NE/SW corners, negative for NW/SE.
inline Scalar rect_dist(const Point& p, const Point& q) {
  return Scalar((p.x - q.x) * (p.y - q.y));
}

inline Scalar minkowski_sq(const Point& p, const Point& q) {
  const Scalar dx = p.x - q.x;
  const Scalar dy = p.y - q.y;
  return dx * dx - dy * dy;
}

inline Scalar distance(Metric metric, const Point& p, const Point& q) {
  switch (metric) {
    case Metric::EuclideanSq: return euclid_sq(p, q);
    case Metric::Rectangular: return rect_dist(p, q);
    case Metric::MinkowskiSq: return minkowski_sq(p, q);
  }
  throw std::logic_error("unreachable metric");
}

/// Scaled 45-degree rotation psi(x, y) = (x + y, y - x). It satisfies
/// minkowski_sq(psi(p), psi(q)) == 4 * rect_dist(p, q) exactly.
inline Point rotate_scaled(const Point& p) { return {Scalar(p.x + p.y), Scalar(p.y - p.x)}; }

// ---------------------------------------------------------------------------
// Lines

/// Integer line a*x + b*y = c with (a, b) != (0, 0), gcd(|a|, |b|, |c|) = 1
/// and the first nonzero of (a, b) positive.
struct CanonicalLine {
  Integer a;
  Integer b;
  Integer c;

  [[nodiscard]] bool is_horizontal() const { return a == 0; }
  [[nodiscard]] bool is_vertical() const { return b == 0; }
  [[nodiscard]] bool contains(const Point& p) const { return a * p.x + b * p.y == c; }

  friend bool operator==(const CanonicalLine& l, const CanonicalLine& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c;
  }
  friend bool operator<(const CanonicalLine& l, const CanonicalLine& r) {
    if (const int s = cmp(l.a, r.a); s != 0) return s < 0;
    if (const int s = cmp(l.b, r.b); s != 0) return s < 0;
    return l.c < r.c;
  }
};

struct CanonicalLineHash {
  std::size_t operator()(const CanonicalLine& l) const noexcept {
    std::size_t h = hash_integer(l.a);
    h ^= hash_integer(l.b) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= hash_integer(l.c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

inline std::string to_display(const CanonicalLine& l) {
  return l.a.get_str() + "x + " + l.b.get_str() + "y = " + l.c.get_str();
}

/// Normalizes an arbitrary integer triple (a, b) != (0, 0).
inline CanonicalLine make_line(Integer a, Integer b, Integer c) {
  if (a == 0 && b == 0) throw std::invalid_argument("line needs (a, b) != (0, 0)");
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  a /= g;
  b /= g;
  c /= g;
  if (a < 0 || (a == 0 && b < 0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  return {std::move(a), std::move(b), std::move(c)};
}

inline CanonicalLine canonical_line(const Point& p, const Point& q) {
  if (p == q) throw std::invalid_argument("canonical_line: points are equal");
  // (q_y - p_y) x + (p_x - q_x) y = (q_y - p_y) p_x + (p_x - q_x) p_y, then clear denominators.
  const Scalar a = q.y - p.y;
  const Scalar b = p.x - q.x;
  const Scalar c = a * p.x + b * p.y;
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return make_line(Integer(a.get_num() * (l / a.get_den())),
                   Integer(b.get_num() * (l / b.get_den())),
                   Integer(c.get_num() * (l / c.get_den())));
}

inline PointSet points_on_line(const PointSet& points, const CanonicalLine& line) {
  std::vector<Point> on;
  for (const Point& p : points) {
    if (line.contains(p)) on.push_back(p);
  }
  return PointSet(std::move(on));
}

}  // namespace ddlab
