#pragma once

// Batch runner: for every size in the sweep, generate a point set, compute
// distance profiles, move the richest line into census position, build the
// curve family, and run the energy checks on the derived sets. Rows are
// collected as CheckReports and rendered as a fixed-schema CSV plus JSON.

#include "ddlab/census.hpp"
#include "ddlab/constructions.hpp"
#include "ddlab/distance_stats.hpp"
#include "ddlab/energy.hpp"
#include "ddlab/hyperbola.hpp"
#include "ddlab/io.hpp"
#include "ddlab/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#ifndef DDLAB_VERSION
#define DDLAB_VERSION "dev"
#endif

namespace ddlab {

inline constexpr const char* kCodeVersion = DDLAB_VERSION;
inline constexpr const char* kReportCsvHeader = "check_name,metric,n,m,lhs,rhs_lo,rhs_hi,verdict,seconds";

// ---------------------------------------------------------------------------
// Configuration

enum class GeneratorKind { Grid, Unbalanced, Random, Line };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Grid;
  Scalar eps = make_scalar(1, 6);            // unbalanced
  std::int64_t bound = 20;                   // random, line
  CanonicalLine line = make_line(1, -1, 0);  // line
  Scalar line_fraction = make_scalar(1, 4);  // line: m = max(2, floor(n * fraction))
};

struct CheckFlags {
  bool distances = true;
  bool census = true;
  bool family = true;
  bool energy = true;
};

struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<Metric> metrics{Metric::EuclideanSq};
  std::optional<Scalar> kappa;
  std::vector<std::int64_t> sizes;
  std::uint64_t seed = 0;
  CheckFlags checks;
  std::string out_dir = "out";
  unsigned precision_cap = 1024;
  bool record_timing = false;
  unsigned workers = 0;  // 0: one per hardware thread
  std::int64_t census_max_n = 200;
  std::int64_t distance_max_n = 5000;
  std::uint64_t pair_sample = 2000;  // curve pairs checked per family
};

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::Grid: return "grid";
    case GeneratorKind::Unbalanced: return "unbalanced";
    case GeneratorKind::Random: return "random";
    case GeneratorKind::Line: return "line";
  }
  return "?";
}

inline GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "grid") return GeneratorKind::Grid;
  if (name == "unbalanced") return GeneratorKind::Unbalanced;
  if (name == "random") return GeneratorKind::Random;
  if (name == "line") return GeneratorKind::Line;
  throw std::invalid_argument("unknown generator: " + std::string(name));
}

/// Throws std::invalid_argument on the first broken invariant.
inline void validate(const ExperimentConfig& c) {
  if (c.sizes.empty()) throw std::invalid_argument("config: sizes is empty");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    if (c.sizes[i] < 1) throw std::invalid_argument("config: sizes must be positive");
    if (i > 0 && c.sizes[i] <= c.sizes[i - 1]) throw std::invalid_argument("config: sizes must be strictly increasing");
    if (c.sizes[i] > c.distance_max_n) throw std::invalid_argument("config: size above distance_max_n");
  }
  if (c.metrics.empty()) throw std::invalid_argument("config: no metric");
  for (Metric m : c.metrics) {
    if (m == Metric::MinkowskiSq) throw std::invalid_argument("config: minkowski-squared has no census pipeline");
    if (m == Metric::Rectangular && (!c.kappa || sgn(*c.kappa) == 0)) {
      throw std::invalid_argument("config: rectangular metric needs a nonzero kappa");
    }
  }
  if (c.precision_cap < 64) throw std::invalid_argument("config: precision cap below 64 bits");
  if (c.generator.kind == GeneratorKind::Unbalanced && (c.generator.eps <= 0 || c.generator.eps >= 1)) {
    throw std::invalid_argument("config: eps must lie in (0, 1)");
  }
  if (c.generator.bound < 1) throw std::invalid_argument("config: bound must be positive");
  if (c.generator.kind == GeneratorKind::Line && (c.generator.line_fraction <= 0 || c.generator.line_fraction > 1)) {
    throw std::invalid_argument("config: line_fraction must lie in (0, 1]");
  }
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json gen = {{"kind", std::string(to_string(c.generator.kind))}};
  switch (c.generator.kind) {
    case GeneratorKind::Grid: break;
    case GeneratorKind::Unbalanced: gen["eps"] = to_string(c.generator.eps); break;
    case GeneratorKind::Random: gen["bound"] = c.generator.bound; break;
    case GeneratorKind::Line:
      gen["bound"] = c.generator.bound;
      gen["line"] = {c.generator.line.a.get_str(), c.generator.line.b.get_str(), c.generator.line.c.get_str()};
      gen["line_fraction"] = to_string(c.generator.line_fraction);
      break;
  }
  nlohmann::json metrics = nlohmann::json::array();
  for (Metric m : c.metrics) metrics.push_back(std::string(to_string(m)));
  nlohmann::json j = {{"generator", gen},
                      {"metrics", metrics},
                      {"sizes", c.sizes},
                      {"seed", c.seed},
                      {"checks",
                       {{"distances", c.checks.distances},
                        {"census", c.checks.census},
                        {"family", c.checks.family},
                        {"energy", c.checks.energy}}},
                      {"precision_cap", c.precision_cap},
                      {"census_max_n", c.census_max_n},
                      {"distance_max_n", c.distance_max_n},
                      {"pair_sample", c.pair_sample}};
  if (c.kappa) j["kappa"] = to_string(*c.kappa);
  // out_dir, workers and record_timing do not change the rows' content.
  return j;
}

namespace detail {

inline Scalar scalar_field(const nlohmann::json& v) {
  if (v.is_string()) return parse_scalar(v.get<std::string>());
  if (v.is_number_integer()) return Scalar(Integer(std::to_string(v.get<long long>())));
  throw std::invalid_argument("config: expected a rational as \"num/den\" or an integer");
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " + where);
    }
  }
}

}  // namespace detail

/// Reads a config object. Unknown keys are errors so that typos surface.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  detail::reject_unknown(j,
                         {"generator", "metric", "metrics", "kappa", "sizes", "seed", "checks", "out_dir", "precision_cap",
                          "record_timing", "workers", "census_max_n", "distance_max_n", "pair_sample"},
                         "config");
  ExperimentConfig c;
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    detail::reject_unknown(g, {"kind", "eps", "bound", "line", "line_fraction"}, "generator");
    c.generator.kind = parse_generator_kind(g.at("kind").get<std::string>());
    if (g.contains("eps")) c.generator.eps = detail::scalar_field(g.at("eps"));
    if (g.contains("bound")) c.generator.bound = g.at("bound").get<std::int64_t>();
    if (g.contains("line")) {
      const auto& l = g.at("line");
      if (!l.is_array() || l.size() != 3) throw std::invalid_argument("config: line must be [a, b, c]");
      c.generator.line = make_line(Integer(std::to_string(l[0].get<long long>())),
                                   Integer(std::to_string(l[1].get<long long>())),
                                   Integer(std::to_string(l[2].get<long long>())));
    }
    if (g.contains("line_fraction")) c.generator.line_fraction = detail::scalar_field(g.at("line_fraction"));
  }
  if (j.contains("metric") && j.contains("metrics")) throw std::invalid_argument("config: give metric or metrics, not both");
  if (j.contains("metric")) {
    const std::string m = j.at("metric").get<std::string>();
    if (m == "both") {
      c.metrics = {Metric::EuclideanSq, Metric::Rectangular};
    } else {
      c.metrics = {parse_metric(m)};
    }
  }
  if (j.contains("metrics")) {
    c.metrics.clear();
    for (const auto& m : j.at("metrics")) c.metrics.push_back(parse_metric(m.get<std::string>()));
  }
  if (j.contains("kappa")) c.kappa = detail::scalar_field(j.at("kappa"));
  if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("checks")) {
    const auto& k = j.at("checks");
    detail::reject_unknown(k, {"distances", "census", "family", "energy"}, "checks");
    c.checks.distances = k.value("distances", true);
    c.checks.census = k.value("census", true);
    c.checks.family = k.value("family", true);
    c.checks.energy = k.value("energy", true);
  }
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("precision_cap")) c.precision_cap = j.at("precision_cap").get<unsigned>();
  if (j.contains("record_timing")) c.record_timing = j.at("record_timing").get<bool>();
  if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
  if (j.contains("census_max_n")) c.census_max_n = j.at("census_max_n").get<std::int64_t>();
  if (j.contains("distance_max_n")) c.distance_max_n = j.at("distance_max_n").get<std::int64_t>();
  if (j.contains("pair_sample")) c.pair_sample = j.at("pair_sample").get<std::uint64_t>();
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(nlohmann::json::parse(read_file(path)));
}

inline std::string config_digest(const ExperimentConfig& c) { return digest(to_json(c).dump()); }

// ---------------------------------------------------------------------------
// Generation

struct GeneratedSet {
  PointSet points;
  nlohmann::json meta;
};

/// Seeds are per size so that each size is reproducible on its own.
inline std::uint64_t size_seed(std::uint64_t seed, std::int64_t n) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(n);
}

inline GeneratedSet generate(const GeneratorSpec& g, std::int64_t n, std::uint64_t seed) {
  GeneratedSet out;
  out.meta["generator"] = std::string(to_string(g.kind));
  out.meta["requested_n"] = n;
  switch (g.kind) {
    case GeneratorKind::Grid: {
      // Largest a x b with a = floor(sqrt n), a * b <= n.
      std::int64_t a = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
      while (a * a > n) --a;
      while ((a + 1) * (a + 1) <= n) ++a;
      const std::int64_t b = n / a;
      out.points = grid(a, b);
      out.meta["dims"] = {a, b};
      break;
    }
    case GeneratorKind::Unbalanced: {
      Lattice l = unbalanced_lattice(n, g.eps);
      out.meta["dims"] = {l.width, l.height};
      out.meta["eps"] = to_string(g.eps);
      out.points = std::move(l.points);
      break;
    }
    case GeneratorKind::Random:
      out.points = random_set(n, g.bound, seed);
      out.meta["bound"] = g.bound;
      out.meta["seed"] = seed;
      break;
    case GeneratorKind::Line: {
      const Integer m_floor = (Integer(static_cast<long>(n)) * g.line_fraction.get_num()) / g.line_fraction.get_den();
      const std::int64_t m = std::min<std::int64_t>(n, std::max<std::int64_t>(2, m_floor.get_si()));
      out.points = line_plus_bulk(g.line, m, n, seed, g.bound);
      out.meta["line"] = to_display(g.line);
      out.meta["on_line"] = m;
      out.meta["bound"] = g.bound;
      out.meta["seed"] = seed;
      break;
    }
  }
  out.meta["n"] = out.points.size();
  return out;
}

// ---------------------------------------------------------------------------
// Scaling fit

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log v - fit| over the series
};

/// Least squares on (log n, log v).
inline ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw std::invalid_argument("scaling_fit: need at least three points");
  double sx = 0, sy = 0;
  for (const auto& [n, v] : series) {
    if (!(n > 0) || !(v > 0)) throw std::invalid_argument("scaling_fit: n and values must be positive");
    sx += std::log(n);
    sy += std::log(v);
  }
  const double k = static_cast<double>(series.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (const auto& [n, v] : series) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0) throw std::invalid_argument("scaling_fit: all n are equal");
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  for (const auto& [n, v] : series) {
    fit.residual = std::max(fit.residual, std::abs(std::log(v) - (fit.intercept + fit.exponent * std::log(n))));
  }
  return fit;
}

// ---------------------------------------------------------------------------
// The per-size pipeline

struct SizeResult {
  std::int64_t requested = 0;
  nlohmann::json meta;
  std::vector<CheckReport> rows;
  std::vector<double> seconds;  // parallel to rows; zeros unless timing is on
  std::optional<std::uint64_t> distinct_euclid;
  std::optional<std::uint64_t> distinct_rect;
  std::optional<std::uint64_t> rich_line;
};

namespace detail {

inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

class RowSink {
 public:
  RowSink(SizeResult& out, bool timing, std::string instance) : out_(out), timing_(timing), instance_(std::move(instance)) {}

  template <typename Fn>
  void run(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckReport> produced = fn();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t i = 0; i < produced.size(); ++i) {
      CheckReport& r = produced[i];
      if (r.instance_digest.empty()) r.instance_digest = instance_;
      out_.rows.push_back(std::move(r));
      // The whole elapsed time is charged to the first row of the group.
      out_.seconds.push_back(timing_ && i == 0 ? elapsed : 0.0);
    }
  }

 private:
  SizeResult& out_;
  bool timing_;
  std::string instance_;
};

inline CheckReport exact_row(std::string check, Metric metric, std::uint64_t n, std::uint64_t m, const Integer& lhs,
                             const Integer& rhs, bool holds) {
  CheckReport r;
  r.check = std::move(check);
  r.metric = std::string(to_string(metric));
  r.n = n;
  r.m = m;
  r.set_exact(lhs.get_str(), rhs.get_str(), holds);
  return r;
}

inline Integer z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

inline std::vector<CheckReport> census_rows(const QuadrupleCensus& census, const CsBoundReport& cs) {
  const Metric metric = census.metric;
  const std::uint64_t n = census.n, m = census.m;
  std::vector<CheckReport> rows;
  // |Q| read off the histogram must equal the pair count it came from.
  rows.push_back(exact_row("census_total", metric, n, m, z(census.profile.total()), z(m * n),
                           census.profile.total() == m * n));
  rows.back().details = {{"q_total", census.q_total}, {"q1", census.q1}, {"q2", census.q2},
                         {"distinct", census.profile.distinct_count()}};
  rows.push_back(exact_row("cauchy_schwarz", metric, n, m, cs.cs_lhs, cs.cs_rhs, cs.cauchy_schwarz));
  rows.push_back(exact_row("q1_bound", metric, n, m, z(census.q1), z(4 * m * m * n), cs.q1_bound));
  CheckReport q2 = exact_row("q2_lower", metric, n, m, z(census.q2), z(m * m * n), census.q2 >= m * m * n);
  if (!cs.few_distances) {
    // Outside the few-distances regime the lower bound is not claimed.
    q2.verdict = Verdict::Measured;
    q2.details["note"] = "hypothesis 5 D(A,P) <= n not met";
  }
  rows.push_back(std::move(q2));
  return rows;
}

inline std::vector<CheckReport> family_rows(const AlignedInstance& inst, const QuadrupleCensus& census, Metric metric,
                                            const ExperimentConfig& config, std::uint64_t seed,
                                            const CurveFamily& family) {
  const std::uint64_t n = inst.points.size(), m = inst.a_side.size();
  std::vector<CheckReport> rows;
  const std::uint64_t inc = incidences(inst.a_side, family);
  rows.push_back(exact_row("census_incidence", metric, n, m, z(inc), z(census.q2), inc == census.q2));

  const CoincidenceReport co = coincidence_structure(family);
  CheckReport cr = exact_row("coincidence", metric, n, m, z(std::max(co.max_p_partners, co.max_q_partners)), z(2),
                             co.ok());
  cr.details = {{"k_max", co.k_max},
                {"classes_checked", co.classes_checked},
                {"lines_ok", co.lines_ok},
                {"b_side_points", co.b_side_points},
                {"a_side_points", co.a_side_points}};
  rows.push_back(std::move(cr));

  const PseudoparabolaReport pp = pseudoparabola_check(family, config.pair_sample, seed);
  CheckReport pr = exact_row("pseudoparabola", metric, n, m, z(pp.failures), z(0), pp.ok());
  pr.details = {{"pairs_checked", pp.pairs_checked},
                {"meet_0", pp.by_count[0]},
                {"meet_1", pp.by_count[1]},
                {"meet_2", pp.by_count[2]}};
  rows.push_back(std::move(pr));

  rows.push_back(incidence_ratio_report(inst.a_side, inst.points, family));
  return rows;
}

/// B0: y-coordinates of the points on the line carrying the p's of a
/// maximal coincidence class, or of all points when there is none.
inline ScalarSet b_side_coordinates(const AlignedInstance& inst, const CurveFamily& family) {
  const CoincidenceReport co = coincidence_structure(family);
  std::vector<Scalar> ys;
  if (co.line_offset) {
    for (const Point& p : inst.points) {
      const Scalar offset = family.metric == Metric::EuclideanSq ? Scalar(p.x) : Scalar(p.y + *family.kappa * p.x);
      if (offset == *co.line_offset) ys.push_back(p.y);
    }
  }
  if (ys.empty()) {
    for (const Point& p : inst.points) ys.push_back(p.y);
  }
  return make_set(std::move(ys));
}

inline constexpr std::size_t kRichContainmentMax = 8;

inline std::vector<CheckReport> energy_rows(const AlignedInstance& inst, const CurveFamily& family, Metric metric,
                                            const ExperimentConfig& config) {
  std::vector<Scalar> xs;
  for (const Point& a : inst.a_side) xs.push_back(a.x);
  const ScalarSet u = make_set(std::move(xs));
  const ScalarSet b0 = b_side_coordinates(inst, family);
  std::vector<Scalar> sq;
  for (const Scalar& b : b0) sq.emplace_back(b * b);
  const ScalarSet v = make_set(std::move(sq));
  const ConvexFn f = metric == Metric::EuclideanSq ? ConvexFn::square() : ConvexFn::quad(*config.kappa, Scalar(0));
  const std::string label = std::string(to_string(metric));

  std::vector<CheckReport> rows;
  HolderChainReport hc = holder_chain_check(u, config.precision_cap);
  hc.integer_chain.metric = label;
  hc.holder.metric = label;
  rows.push_back(std::move(hc.integer_chain));
  rows.push_back(std::move(hc.holder));

  CheckReport li = li_inequality_check(u, b0, config.precision_cap);
  li.metric = label;
  rows.push_back(std::move(li));

  if (u.size() >= 2) {
    CheckReport lr = lr_ratio_report(f, u, v);
    lr.metric = label;
    rows.push_back(std::move(lr));
  }
  if (u.size() >= 2 && u.size() <= kRichContainmentMax && v.size() <= kRichContainmentMax) {
    CheckReport rc = rich_containment_check(f, u, u, v, 2);
    rc.metric = label;
    rows.push_back(std::move(rc));
  }

  const DyadicReport dy = dyadic_decomposition_check(u, difference_set(u, u), std::nullopt, ThresholdInputs{f, v});
  const auto band_total = [](const std::vector<DyadicBand>& bands) {
    Integer t = 0;
    for (const DyadicBand& b : bands) t += b.sum;
    return t;
  };
  // Each energy against its re-summation over the dyadic bands.
  CheckReport e3 = exact_row("dyadic_e3", metric, u.size(), 0, dy.e3, band_total(dy.e3_bands), dy.e3_identity);
  e3.details = to_json(dy);
  rows.push_back(std::move(e3));
  if (dy.pair_energy) {
    CheckReport pe = exact_row("dyadic_pair_energy", metric, u.size(), v.size(), *dy.pair_energy,
                               band_total(dy.pair_bands), *dy.pair_identity && dy.delta_star_ge_one.value_or(true));
    pe.details["delta_squared"] = to_string(*dy.delta_sq);
    if (dy.delta_star_ge_one) pe.details["delta_star_ge_one"] = *dy.delta_star_ge_one;
    rows.push_back(std::move(pe));
  }
  return rows;
}

}  // namespace detail

inline SizeResult run_size(const ExperimentConfig& config, std::int64_t requested) {
  const std::uint64_t seed = size_seed(config.seed, requested);
  GeneratedSet gen = generate(config.generator, requested, seed);
  SizeResult out;
  out.requested = requested;
  out.meta = gen.meta;
  const PointSet& points = gen.points;
  const std::uint64_t n = points.size();
  const std::string instance = digest(to_json(points).dump());
  detail::RowSink sink(out, config.record_timing, instance);

  sink.run([&] {
    CheckReport r;
    r.check = "instance";
    r.n = n;
    r.lhs = std::to_string(n);
    r.rhs_lo = r.rhs_hi = std::to_string(requested);
    r.details = gen.meta;
    return std::vector<CheckReport>{r};
  });
  if (n < 2) return out;

  if (config.checks.distances) {
    for (Metric metric : config.metrics) {
      sink.run([&] {
        const DistanceProfile prof = distinct_distances(points, metric);
        CheckReport r = detail::exact_row("distinct_distances", metric, n, 0, detail::z(prof.distinct_count()),
                                          detail::z(prof.pairs), prof.distinct_count() <= prof.pairs);
        r.details = {{"max_multiplicity", prof.max_multiplicity()}, {"zero_policy", "attained"}};
        (metric == Metric::EuclideanSq ? out.distinct_euclid : out.distinct_rect) = prof.distinct_count();
        return std::vector<CheckReport>{r};
      });
    }
    sink.run([&] {
      const auto rich = max_line_richness(points, false);
      CheckReport r;
      r.check = "line_richness";
      r.n = n;
      r.m = rich->count;
      r.lhs = std::to_string(rich->count);
      r.rhs_lo = r.rhs_hi = std::to_string(n);
      r.details["line"] = to_display(rich->line);
      out.rich_line = rich->count;
      return std::vector<CheckReport>{r};
    });
  }

  const bool census_path = (config.checks.census || config.checks.family || config.checks.energy);
  if (!census_path) return out;
  if (static_cast<std::int64_t>(n) > config.census_max_n) {
    out.meta["census_skipped"] = "n above census_max_n";
    return out;
  }

  for (Metric metric : config.metrics) {
    std::optional<AlignedInstance> inst;
    if (metric == Metric::EuclideanSq) {
      inst = align_to_x_axis(points, max_line_richness(points, false)->line);
    } else {
      // A = P on y = kappa x, through the origin of the generator's frame.
      const Scalar& k = *config.kappa;
      const CanonicalLine line = make_line(Integer(k.get_num()), Integer(-k.get_den()), Integer(0));
      std::vector<Point> on;
      for (const Point& p : points) {
        if (line.contains(p)) on.push_back(p);
      }
      if (on.empty()) {
        out.meta["rectangular_census_skipped"] = "no point on y = kappa x";
        continue;
      }
      inst = AlignedInstance{PointSet(std::move(on)), points, k};
    }
    std::optional<QuadrupleCensus> census;
    if (config.checks.census || config.checks.family) {
      census = metric == Metric::EuclideanSq ? census_euclid(inst->a_side, inst->points)
                                             : census_rect(inst->a_side, inst->points, *inst->kappa);
    }
    if (config.checks.census) {
      sink.run([&] { return detail::census_rows(*census, cs_bound_report(*census, census->profile)); });
    }
    if (!config.checks.family && !config.checks.energy) continue;
    const CurveFamily family = build_family(inst->points, metric, inst->kappa);
    if (config.checks.family) {
      sink.run([&] { return detail::family_rows(*inst, *census, metric, config, seed, family); });
    }
    if (config.checks.energy) {
      sink.run([&] { return detail::energy_rows(*inst, family, metric, config); });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Whole sweep

struct ExperimentResult {
  std::string config_digest;
  std::vector<SizeResult> sizes;
  std::vector<CheckReport> fits;  // one per fitted series

  [[nodiscard]] bool any_violated() const {
    for (const SizeResult& s : sizes) {
      for (const CheckReport& r : s.rows) {
        if (r.failed()) return true;
      }
    }
    return false;
  }
  [[nodiscard]] bool any_undecided() const {
    for (const SizeResult& s : sizes) {
      for (const CheckReport& r : s.rows) {
        if (r.verdict == Verdict::Undecided) return true;
      }
    }
    return false;
  }
};

namespace detail {

inline std::optional<CheckReport> fit_row(const std::string& name, const std::string& metric,
                                          const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) return std::nullopt;
  CheckReport r;
  r.check = name;
  r.metric = metric;
  r.n = static_cast<std::uint64_t>(series.back().first);
  r.m = series.size();
  try {
    const ScalingFit fit = scaling_fit(series);
    r.lhs = fixed(fit.exponent);
    r.rhs_lo = r.rhs_hi = fixed(fit.residual);
    r.details = {{"exponent", fit.exponent}, {"intercept", fit.intercept}, {"max_residual", fit.residual}};
  } catch (const std::invalid_argument& e) {
    r.lhs = "nan";
    r.rhs_lo = r.rhs_hi = "nan";
    r.details["note"] = e.what();
  }
  return r;
}

}  // namespace detail

/// Runs every size (concurrently, at most `workers` at a time) and fits
/// log-log slopes for D(P) and the richest line against n.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  result.config_digest = config_digest(config);
  unsigned workers = config.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : config.workers;
  result.sizes.resize(config.sizes.size());
  for (std::size_t start = 0; start < config.sizes.size(); start += workers) {
    const std::size_t stop = std::min(config.sizes.size(), start + workers);
    std::vector<std::future<SizeResult>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, [&config, n = config.sizes[i]] { return run_size(config, n); }));
    }
    for (std::size_t i = start; i < stop; ++i) result.sizes[i] = batch[i - start].get();
  }

  std::vector<std::pair<double, double>> de, dr, rich;
  for (const SizeResult& s : result.sizes) {
    const double n = static_cast<double>(s.meta.value("n", 0));
    if (s.distinct_euclid) de.emplace_back(n, static_cast<double>(*s.distinct_euclid));
    if (s.distinct_rect && *s.distinct_rect > 0) dr.emplace_back(n, static_cast<double>(*s.distinct_rect));
    if (s.rich_line) rich.emplace_back(n, static_cast<double>(*s.rich_line));
  }
  for (auto row : {detail::fit_row("fit_distinct", "euclidean-squared", de),
                   detail::fit_row("fit_distinct", "rectangular", dr), detail::fit_row("fit_line_richness", "none", rich)}) {
    if (row) result.fits.push_back(std::move(*row));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const CheckReport& r, double seconds, bool timing) {
  return csv_field(r.check) + "," + csv_field(r.metric) + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," +
         csv_field(r.lhs) + "," + csv_field(r.rhs_lo) + "," + csv_field(r.rhs_hi) + "," +
         std::string(to_string(r.verdict)) + "," + (timing ? fixed(seconds, 3) : std::string("0")) + "\n";
}

inline nlohmann::json row_json(const CheckReport& r, const std::string& config_digest) {
  nlohmann::json j = to_json(r);
  j["config_digest"] = config_digest;
  j["code_version"] = kCodeVersion;
  return j;
}

}  // namespace detail

inline std::string render_csv(const ExperimentResult& result, bool timing) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const SizeResult& s : result.sizes) {
    for (std::size_t i = 0; i < s.rows.size(); ++i) out += detail::csv_row(s.rows[i], s.seconds[i], timing);
  }
  for (const CheckReport& r : result.fits) out += detail::csv_row(r, 0.0, timing);
  return out;
}

inline nlohmann::json size_json(const SizeResult& s, const std::string& config_digest) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CheckReport& r : s.rows) rows.push_back(detail::row_json(r, config_digest));
  return {{"requested_n", s.requested}, {"meta", s.meta}, {"rows", rows},
          {"config_digest", config_digest}, {"code_version", kCodeVersion}};
}

inline nlohmann::json render_json(const ExperimentResult& result, const ExperimentConfig& config) {
  nlohmann::json sizes = nlohmann::json::array();
  for (const SizeResult& s : result.sizes) sizes.push_back(size_json(s, result.config_digest));
  nlohmann::json fits = nlohmann::json::array();
  for (const CheckReport& r : result.fits) fits.push_back(detail::row_json(r, result.config_digest));
  return {{"config", to_json(config)},
          {"config_digest", result.config_digest},
          {"code_version", kCodeVersion},
          {"sizes", sizes},
          {"fits", fits},
          {"any_violated", result.any_violated()},
          {"any_undecided", result.any_undecided()}};
}

/// report.csv, report.json and one size_<n>.json per size, each written
/// atomically.
inline void write_experiment(const ExperimentResult& result, const ExperimentConfig& config,
                             const std::filesystem::path& out_dir) {
  for (const SizeResult& s : result.sizes) {
    write_file_atomic(out_dir / ("size_" + std::to_string(s.requested) + ".json"),
                      size_json(s, result.config_digest).dump(2) + "\n");
  }
  write_file_atomic(out_dir / "report.csv", render_csv(result, config.record_timing));
  write_file_atomic(out_dir / "report.json", render_json(result, config).dump(2) + "\n");
}

}  // namespace ddlab
