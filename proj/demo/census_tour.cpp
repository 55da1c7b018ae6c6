// Walks one small instance through the whole pipeline: a 5 x 5 grid, its
// richest line, the quadruple census, the curve family and the balance.

#include "ddlab/census.hpp"
#include "ddlab/constructions.hpp"
#include "ddlab/distance_stats.hpp"
#include "ddlab/exponents.hpp"
#include "ddlab/hyperbola.hpp"

#include <iostream>

int main() {
  using namespace ddlab;
  const PointSet points = grid(5, 5);
  const DistanceProfile prof = distinct_distances(points, Metric::EuclideanSq);
  const LineRichness rich = *max_line_richness(points, false);
  std::cout << "n = " << points.size() << ", D(P) = " << prof.distinct_count() << ", richest line "
            << to_display(rich.line) << " with " << rich.count << " points\n";

  const AlignedInstance inst = align_to_x_axis(points, rich.line);
  const QuadrupleCensus census = census_euclid(inst.a_side, inst.points);
  std::cout << "|Q| = " << census.q_total << ", |Q1| = " << census.q1 << ", |Q2| = " << census.q2 << "\n";

  const CurveFamily family = build_family(inst.points, Metric::EuclideanSq);
  std::cout << "curves = " << family.total << " (" << family.distinct() << " distinct), k = " << family.k_max
            << ", incidences = " << incidences(inst.a_side, family) << "\n";

  const RichLineDerivation d = rich_line_derivation(Metric::EuclideanSq);
  std::cout << "m = O*(n^" << to_display(d.balance.max) << ")\n";
  return 0;
}
