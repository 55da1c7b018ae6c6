#pragma once

// Generators for the point-set families used as examples and extremal
// candidates: lattices, unbalanced lattices, a rich line plus bulk, and
// uniform random integer sets.

#include "ddlab/geometry.hpp"
#include "ddlab/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace ddlab {

/// {0..a-1} x {0..b-1}.
inline PointSet grid(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1) throw std::invalid_argument("grid: dimensions must be positive");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(a * b));
  for (std::int64_t i = 0; i < a; ++i) {
    for (std::int64_t j = 0; j < b; ++j) pts.emplace_back(i, j);
  }
  return PointSet(std::move(pts));
}

/// floor(n^e) for rational e in [0, 1], computed exactly as the integer
/// q-th root of n^p.
inline std::int64_t floor_rational_power(std::int64_t n, const Scalar& e) {
  if (n < 1) throw std::invalid_argument("floor_rational_power: n must be positive");
  if (sgn(e) < 0 || e > 1) throw std::invalid_argument("floor_rational_power: exponent outside [0,1]");
  const unsigned long p = e.get_num().get_ui();
  const unsigned long q = e.get_den().get_ui();
  Integer power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n), p);
  Integer root;
  mpz_root(root.get_mpz_t(), power.get_mpz_t(), q);
  return root.get_si();
}

struct Lattice {
  PointSet points;
  std::int64_t width = 0;   // floor(n^(1-eps)), the x extent
  std::int64_t height = 0;  // floor(n^eps)
};

/// {1..floor(n^(1-eps))} x {1..floor(n^eps)}. Dimensions are rounded down
/// when n^(1-eps), n^eps are not integers; the actual ones are reported.
inline Lattice unbalanced_lattice(std::int64_t n, const Scalar& eps) {
  if (sgn(eps) <= 0 || eps >= 1) throw std::invalid_argument("unbalanced_lattice: eps must lie in (0,1)");
  Lattice out;
  out.width = floor_rational_power(n, Scalar(1 - eps));
  out.height = floor_rational_power(n, eps);
  if (out.width < 1 || out.height < 1) {
    throw std::invalid_argument("unbalanced_lattice: degenerate dimensions");
  }
  std::vector<Point> pts;
  for (std::int64_t i = 1; i <= out.width; ++i) {
    for (std::int64_t j = 1; j <= out.height; ++j) pts.emplace_back(i, j);
  }
  out.points = PointSet(std::move(pts));
  return out;
}

/// n distinct integer points in [-bound, bound]^2. Saturated requests return
/// the full box; dense ones use a partial shuffle, sparse ones rejection.
inline PointSet random_set(std::int64_t n, std::int64_t bound, std::uint64_t seed) {
  if (n < 0 || bound < 0) throw std::invalid_argument("random_set: negative parameter");
  const std::int64_t side = 2 * bound + 1;
  const std::int64_t cells = side * side;
  if (n > cells) throw std::invalid_argument("random_set: infeasible density");
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  if (2 * n > cells) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(cells));
    for (std::int64_t i = 0; i < cells; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cells - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      const std::int64_t cell = idx[static_cast<std::size_t>(i)];
      pts.emplace_back(cell / side - bound, cell % side - bound);
    }
    return PointSet(std::move(pts));
  }
  std::unordered_set<Point, PointHash> seen;
  while (static_cast<std::int64_t>(pts.size()) < n) {
    Point p(rng.between(-bound, bound), rng.between(-bound, bound));
    if (seen.insert(p).second) pts.push_back(std::move(p));
  }
  return PointSet(std::move(pts));
}

/// Integer points of `line` inside [-bound, bound]^2, in increasing parameter order.
inline std::vector<Point> lattice_points_on_line(const CanonicalLine& line, std::int64_t bound) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), line.a.get_mpz_t(), line.b.get_mpz_t());
  std::vector<Point> out;
  if (line.c % g != 0) return out;
  // Particular solution (x0, y0) and primitive direction (b/g, -a/g).
  const Integer k = line.c / g;
  const Integer x0 = s * k;
  const Integer y0 = t * k;
  const Integer dx = line.b / g;
  const Integer dy = -line.a / g;
  // Parameter range from each coordinate constraint |x0 + u dx| <= bound, |y0 + u dy| <= bound.
  Scalar lo_u, hi_u;
  bool first = true;
  const auto clamp = [&](const Integer& base, const Integer& dir) {
    if (dir == 0) return abs(base) <= bound;
    Scalar a = make_scalar(Integer(-bound - base), dir);
    Scalar b = make_scalar(Integer(bound - base), dir);
    if (b < a) std::swap(a, b);
    if (first) {
      lo_u = a;
      hi_u = b;
      first = false;
    } else {
      lo_u = lo_u < a ? a : lo_u;
      hi_u = hi_u < b ? hi_u : b;
    }
    return true;
  };
  if (!clamp(x0, dx) || !clamp(y0, dy)) return out;
  Integer u_lo, u_hi;
  mpz_cdiv_q(u_lo.get_mpz_t(), lo_u.get_num_mpz_t(), lo_u.get_den_mpz_t());
  mpz_fdiv_q(u_hi.get_mpz_t(), hi_u.get_num_mpz_t(), hi_u.get_den_mpz_t());
  for (Integer u = u_lo; u <= u_hi; ++u) {
    out.emplace_back(Scalar(x0 + u * dx), Scalar(y0 + u * dy));
  }
  return out;
}

/// n distinct integer points in [-bound, bound]^2, exactly m of them on `line`.
inline PointSet line_plus_bulk(const CanonicalLine& line, std::int64_t m, std::int64_t n,
                               std::uint64_t seed, std::int64_t bound) {
  if (m < 1) throw std::invalid_argument("line_plus_bulk: need at least one point on the line");
  if (m > n) throw std::invalid_argument("line_plus_bulk: m exceeds n");
  std::vector<Point> on_line = lattice_points_on_line(line, bound);
  const auto available = static_cast<std::int64_t>(on_line.size());
  const std::int64_t side = 2 * bound + 1;
  if (available < m || side * side - available < n - m) {
    throw std::invalid_argument("line_plus_bulk: infeasible bound");
  }
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(available - i)));
    std::swap(on_line[static_cast<std::size_t>(i)], on_line[static_cast<std::size_t>(j)]);
    pts.push_back(on_line[static_cast<std::size_t>(i)]);
  }
  // Off-line bulk by rejection; feasibility was checked above. Dense boxes
  // fall back to scanning the free cells.
  const std::int64_t need = n - m;
  if (4 * need > side * side - available) {
    std::vector<Point> free_cells;
    for (std::int64_t x = -bound; x <= bound; ++x) {
      for (std::int64_t y = -bound; y <= bound; ++y) {
        Point p(x, y);
        if (!line.contains(p)) free_cells.push_back(std::move(p));
      }
    }
    const auto total = static_cast<std::int64_t>(free_cells.size());
    for (std::int64_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total - i)));
      std::swap(free_cells[static_cast<std::size_t>(i)], free_cells[static_cast<std::size_t>(j)]);
      pts.push_back(free_cells[static_cast<std::size_t>(i)]);
    }
    return PointSet(std::move(pts));
  }
  std::unordered_set<Point, PointHash> seen(pts.begin(), pts.end());
  std::int64_t added = 0;
  while (added < need) {
    Point p(rng.between(-bound, bound), rng.between(-bound, bound));
    if (line.contains(p) || !seen.insert(p).second) continue;
    pts.push_back(std::move(p));
    ++added;
  }
  return PointSet(std::move(pts));
}

}  // namespace ddlab
