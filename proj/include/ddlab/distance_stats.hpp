#pragma once

// Distinct-distance statistics: D(P) and its rectangular / Minkowski
// analogues, bipartite profiles over A x P, line richness and product-set
// sizes.

#include "ddlab/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ddlab {

/// Whether a zero value produced by two distinct points is counted.
/// Squared Euclidean distance never vanishes on distinct points, so the
/// policy only matters for the rectangular and Minkowski forms.
enum class ZeroPolicy { Attained, Exclude };

struct DistanceProfile {
  Metric metric = Metric::EuclideanSq;
  bool bipartite = false;
  std::uint64_t pairs = 0;  // pairs enumerated, including any dropped zeros
  std::vector<std::pair<Scalar, std::uint64_t>> histogram;  // sorted by value
  bool a_subset_of_p = true;  // bipartite only; false means the caller broke the precondition

  [[nodiscard]] std::size_t distinct_count() const noexcept { return histogram.size(); }

  [[nodiscard]] std::uint64_t max_multiplicity() const {
    std::uint64_t best = 0;
    for (const auto& [v, c] : histogram) best = std::max(best, c);
    return best;
  }

  [[nodiscard]] std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& [v, c] : histogram) s += c;
    return s;
  }

  [[nodiscard]] std::uint64_t multiplicity(const Scalar& value) const {
    const auto it = std::lower_bound(histogram.begin(), histogram.end(), value,
                                     [](const auto& e, const Scalar& v) { return e.first < v; });
    return it != histogram.end() && it->first == value ? it->second : 0;
  }
};

namespace detail {

using Counts = std::unordered_map<Scalar, std::uint64_t, ScalarHash>;

inline std::vector<std::pair<Scalar, std::uint64_t>> sorted_histogram(const Counts& counts) {
  std::vector<std::pair<Scalar, std::uint64_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return out;
}

}  // namespace detail

/// Distinct values of `metric` over unordered pairs of distinct points.
/// `workers` > 1 splits the outer loop across threads; the merged histogram
/// does not depend on the split.
inline DistanceProfile distinct_distances(const PointSet& points, Metric metric,
                                          ZeroPolicy zero = ZeroPolicy::Attained,
                                          unsigned workers = 1) {
  if (points.size() < 2) throw std::invalid_argument("distinct_distances: need at least two points");
  const std::size_t n = points.size();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(n)));

  std::vector<detail::Counts> partial(workers);
  const auto work = [&](unsigned w) {
    auto& counts = partial[w];
    for (std::size_t i = w; i < n; i += workers) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Scalar v = distance(metric, points[i], points[j]);
        if (zero == ZeroPolicy::Exclude && sgn(v) == 0) continue;
        ++counts[std::move(v)];
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (unsigned w = 1; w < workers; ++w) {
    for (auto& [v, c] : partial[w]) partial[0][v] += c;
  }

  DistanceProfile out;
  out.metric = metric;
  out.pairs = n * (n - 1) / 2;
  out.histogram = detail::sorted_histogram(partial[0]);
  return out;
}

/// Distinct values over ordered pairs (a, p) in A x P. The histogram entries
/// are the multiplicities M_i; they always sum to |A| * |P|.
inline DistanceProfile bipartite_distinct(const PointSet& a_side, const PointSet& points, Metric metric) {
  if (a_side.empty() || points.empty()) throw std::invalid_argument("bipartite_distinct: empty input");
  detail::Counts counts;
  for (const Point& a : a_side) {
    for (const Point& p : points) ++counts[distance(metric, a, p)];
  }
  DistanceProfile out;
  out.metric = metric;
  out.bipartite = true;
  out.pairs = static_cast<std::uint64_t>(a_side.size()) * points.size();
  out.histogram = detail::sorted_histogram(counts);
  out.a_subset_of_p = a_side.is_subset_of(points);
  return out;
}

struct LineRichness {
  CanonicalLine line;
  std::uint64_t count = 0;
};

namespace detail {

struct DirectionHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& d) const noexcept {
    return std::hash<std::int64_t>{}(d.first) * 0x9E3779B97F4A7C15ULL ^ std::hash<std::int64_t>{}(d.second);
  }
};

struct IntegerDirectionHash {
  std::size_t operator()(const std::pair<Integer, Integer>& d) const noexcept {
    return hash_integer(d.first) * 0x9E3779B97F4A7C15ULL ^ hash_integer(d.second);
  }
};

inline bool small_integer_coordinates(const PointSet& points) {
  // |coordinate| < 2^30 keeps every difference and its gcd in int64.
  const Integer limit = Integer(1) << 30;
  for (const Point& p : points) {
    if (!is_integer(p.x) || !is_integer(p.y)) return false;
    if (abs(p.x.get_num()) >= limit || abs(p.y.get_num()) >= limit) return false;
  }
  return true;
}

/// For each anchor i, counts the points j > i per reduced direction. The
/// lexicographically smallest point of a line sees all of the line's other
/// points, so its count is exact. Calls visit(i, j, count) with a witness j
/// for every direction reaching the running maximum.
template <typename Direction, typename Hash, typename MakeDirection, typename Visit>
void scan_directions(const PointSet& points, bool exclude_axis_parallel, MakeDirection&& make, Visit&& visit) {
  std::unordered_map<Direction, std::pair<std::uint64_t, std::size_t>, Hash> counts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    counts.clear();
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      Direction d = make(points[i], points[j]);
      if (exclude_axis_parallel && (d.first == 0 || d.second == 0)) continue;
      auto& e = counts[std::move(d)];
      if (e.first++ == 0) e.second = j;
    }
    for (const auto& [d, e] : counts) visit(i, e.second, e.first + 1);
  }
}

}  // namespace detail

/// A line maximizing |P ∩ l|; ties go to the lexicographically smallest
/// canonical triple. With `exclude_axis_parallel`, horizontal and vertical
/// lines are skipped, and nullopt is returned when no other line exists.
inline std::optional<LineRichness> max_line_richness(const PointSet& points, bool exclude_axis_parallel) {
  if (points.size() < 2) throw std::invalid_argument("max_line_richness: need at least two points");
  std::uint64_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;
  const auto visit = [&](std::size_t i, std::size_t j, std::uint64_t count) {
    if (count > best) {
      best = count;
      witnesses.clear();
    }
    if (count == best) witnesses.emplace_back(i, j);
  };
  if (detail::small_integer_coordinates(points)) {
    using D = std::pair<std::int64_t, std::int64_t>;
    detail::scan_directions<D, detail::DirectionHash>(
        points, exclude_axis_parallel,
        [](const Point& p, const Point& q) {
          std::int64_t dx = Integer(q.x.get_num() - p.x.get_num()).get_si();
          std::int64_t dy = Integer(q.y.get_num() - p.y.get_num()).get_si();
          const std::int64_t g = std::gcd(dx, dy);
          dx /= g;
          dy /= g;
          if (dx < 0 || (dx == 0 && dy < 0)) {
            dx = -dx;
            dy = -dy;
          }
          return D{dx, dy};
        },
        visit);
  } else {
    using D = std::pair<Integer, Integer>;
    detail::scan_directions<D, detail::IntegerDirectionHash>(
        points, exclude_axis_parallel,
        [](const Point& p, const Point& q) {
          const CanonicalLine through_origin = canonical_line(Point(0L, 0L), Point(Scalar(q.x - p.x), Scalar(q.y - p.y)));
          // The normal (a, b) of the parallel line through the origin identifies the direction.
          return D{through_origin.a, through_origin.b};
        },
        visit);
  }
  if (best == 0) return std::nullopt;
  std::optional<LineRichness> out;
  for (const auto& [i, j] : witnesses) {
    CanonicalLine line = canonical_line(points[i], points[j]);
    if (!out || line < out->line) out = LineRichness{std::move(line), best};
  }
  return out;
}

/// |{ i * j : 1 <= i <= a, 1 <= j <= b }| by enumeration.
inline std::uint64_t product_set_count(std::uint64_t a, std::uint64_t b) {
  if (a < 1 || b < 1) throw std::invalid_argument("product_set_count: factors must be positive");
  std::vector<std::uint64_t> products;
  products.reserve(a * b);
  for (std::uint64_t i = 1; i <= a; ++i) {
    for (std::uint64_t j = 1; j <= b; ++j) products.push_back(i * j);
  }
  std::sort(products.begin(), products.end());
  return static_cast<std::uint64_t>(std::unique(products.begin(), products.end()) - products.begin());
}

}  // namespace ddlab
