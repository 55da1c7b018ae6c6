// ddlab: command-line front end for the distinct-distances lab.
//
//   ddlab gen      --generator grid --n 25            > points.json
//   ddlab stats    --input points.json --metric rectangular
//   ddlab census   --input points.json --metric euclidean
//   ddlab family   --input points.json --metric rectangular --kappa 1
//   ddlab energy   --a 0,1,2,4 --b 1,3
//   ddlab sweep    --config configs/grid.json
//   ddlab balance  --derive rectangular
//
// Exit status: 0 when every exact check holds, 1 when one is violated,
// 2 on bad input. UNDECIDED comparisons only print a warning.

#include "ddlab/census.hpp"
#include "ddlab/constructions.hpp"
#include "ddlab/distance_stats.hpp"
#include "ddlab/energy.hpp"
#include "ddlab/experiment.hpp"
#include "ddlab/exponents.hpp"
#include "ddlab/hyperbola.hpp"
#include "ddlab/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ddlab;
using nlohmann::json;

struct Global {
  std::uint64_t seed = 0;
  unsigned precision_bits = 1024;
  std::string out_dir;
};

std::vector<Scalar> parse_list(const std::string& text) {
  std::vector<Scalar> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_scalar(item));
  }
  return out;
}

CanonicalLine parse_line(const std::string& text) {
  const std::vector<Scalar> v = parse_list(text);
  if (v.size() != 3) throw std::invalid_argument("--line expects a,b,c");
  for (const Scalar& s : v) {
    if (!is_integer(s)) throw std::invalid_argument("--line coefficients must be integers");
  }
  return make_line(v[0].get_num(), v[1].get_num(), v[2].get_num());
}

/// Prints the document and, with --out-dir, also stores it as <name>.json.
void emit(const Global& g, const std::string& name, const json& doc) {
  std::cout << doc.dump(2) << "\n";
  if (!g.out_dir.empty()) write_file_atomic(std::filesystem::path(g.out_dir) / (name + ".json"), doc.dump(2) + "\n");
}

int exit_for(const std::vector<CheckReport>& rows) {
  bool violated = false;
  for (const CheckReport& r : rows) {
    if (r.verdict == Verdict::Undecided) std::cerr << "warning: " << r.check << " is UNDECIDED\n";
    violated = violated || r.failed();
  }
  return violated ? 1 : 0;
}

// Puts A = P ∩ (richest line) on the x-axis, or takes A = P ∩ {y = kappa x}.
AlignedInstance census_instance(const PointSet& points, Metric metric, const std::optional<Scalar>& kappa) {
  if (metric == Metric::EuclideanSq) return align_to_x_axis(points, max_line_richness(points, false)->line);
  if (metric != Metric::Rectangular) throw std::invalid_argument("census needs a euclidean or rectangular metric");
  if (kappa) {
    if (sgn(*kappa) == 0) throw std::invalid_argument("--kappa must be nonzero");
    const PointSet on = points_on_line(points, make_line(kappa->get_num(), Integer(-kappa->get_den()), Integer(0)));
    if (on.empty()) throw std::invalid_argument("no point of P lies on y = kappa x");
    return {on, points, *kappa};
  }
  const auto rich = max_line_richness(points, true);
  if (!rich) throw std::invalid_argument("P has no line that is not axis-parallel");
  return translate_through_origin(points, rich->line);
}

int cmd_gen(const Global& g, const std::string& kind, std::int64_t n, std::int64_t a, std::int64_t b,
            const std::string& eps, std::int64_t bound, const std::string& line, std::int64_t m) {
  PointSet points;
  if (kind == "grid") {
    points = a > 0 && b > 0 ? grid(a, b) : generate({GeneratorKind::Grid}, n, g.seed).points;
  } else if (kind == "unbalanced") {
    points = unbalanced_lattice(n, parse_scalar(eps)).points;
  } else if (kind == "random") {
    points = random_set(n, bound, g.seed);
  } else if (kind == "line") {
    points = line_plus_bulk(parse_line(line), m, n, g.seed, bound);
  } else {
    throw std::invalid_argument("unknown generator " + kind);
  }
  emit(g, "points", to_json(points));
  return 0;
}

int cmd_stats(const Global& g, const std::string& input, const std::string& metric_name, bool exclude_zero,
              bool csv, unsigned workers) {
  const PointSet points = load_point_set(input);
  const Metric metric = parse_metric(metric_name);
  const DistanceProfile prof =
      distinct_distances(points, metric, exclude_zero ? ZeroPolicy::Exclude : ZeroPolicy::Attained, workers);
  if (csv) {
    std::cout << kProfileCsvHeader << "\n" << profile_csv_row(prof, points.size()) << "\n";
    return 0;
  }
  json doc = to_json(prof);
  doc["n"] = points.size();
  const auto rich = max_line_richness(points, metric == Metric::Rectangular);
  if (rich) doc["richest_line"] = {{"line", to_display(rich->line)}, {"count", rich->count}};
  emit(g, "stats", doc);
  return 0;
}

int cmd_census(const Global& g, const std::string& input, const std::string& metric_name,
               const std::optional<Scalar>& kappa) {
  const PointSet points = load_point_set(input);
  const Metric metric = parse_metric(metric_name);
  const AlignedInstance inst = census_instance(points, metric, kappa);
  const QuadrupleCensus census = metric == Metric::EuclideanSq ? census_euclid(inst.a_side, inst.points)
                                                               : census_rect(inst.a_side, inst.points, *inst.kappa);
  const CsBoundReport cs = cs_bound_report(census, census.profile);
  json doc = to_json(cs);
  doc["distinct_a_p"] = census.profile.distinct_count();
  doc["max_partner_candidates"] = census.max_partner_candidates;
  if (inst.kappa) doc["kappa"] = to_string(*inst.kappa);
  emit(g, "census", doc);
  return cs.ok() ? 0 : 1;
}

int cmd_family(const Global& g, const std::string& input, const std::string& metric_name,
               const std::optional<Scalar>& kappa, std::uint64_t sample) {
  const PointSet points = load_point_set(input);
  const Metric metric = parse_metric(metric_name);
  const AlignedInstance inst = census_instance(points, metric, kappa);
  const CurveFamily family = build_family(inst.points, metric, inst.kappa);
  const QuadrupleCensus census = metric == Metric::EuclideanSq ? census_euclid(inst.a_side, inst.points)
                                                               : census_rect(inst.a_side, inst.points, *inst.kappa);
  const std::uint64_t inc = incidences(inst.a_side, family);
  const CoincidenceReport co = coincidence_structure(family);
  const PseudoparabolaReport pp = pseudoparabola_check(family, sample, g.seed);
  const CheckReport ratio = incidence_ratio_report(inst.a_side, inst.points, family);

  json doc = summary(family);
  doc["incidences"] = inc;
  doc["census_q2"] = census.q2;
  doc["identity_holds"] = inc == census.q2;
  doc["coincidence"] = {{"ok", co.ok()},
                        {"classes_checked", co.classes_checked},
                        {"max_p_partners", co.max_p_partners},
                        {"max_q_partners", co.max_q_partners},
                        {"b_side_points", co.b_side_points},
                        {"a_side_points", co.a_side_points}};
  doc["pseudoparabola"] = {{"pairs_checked", pp.pairs_checked},
                           {"by_count", {pp.by_count[0], pp.by_count[1], pp.by_count[2]}},
                           {"failures", pp.failures}};
  doc["incidence_ratio"] = to_json(ratio);
  emit(g, "family", doc);
  return inc == census.q2 && co.ok() && pp.ok() ? 0 : 1;
}

int cmd_energy(const Global& g, const std::string& a_text, const std::string& b_text, const std::string& c_text,
               std::uint64_t t) {
  const ScalarSet a = make_set(parse_list(a_text));
  const ScalarSet b = b_text.empty() ? a : make_set(parse_list(b_text));
  if (a.empty()) throw std::invalid_argument("--a is empty");
  std::vector<CheckReport> rows;
  HolderChainReport hc = holder_chain_check(a, g.precision_bits);
  rows.push_back(hc.integer_chain);
  rows.push_back(hc.holder);
  rows.push_back(li_inequality_check(a, b, g.precision_bits));
  if (a.size() >= 2) rows.push_back(lr_ratio_report(ConvexFn::square(), a, b));
  if (!c_text.empty()) {
    rows.push_back(rich_containment_check(ConvexFn::square(), a, b, make_set(parse_list(c_text)), t));
  }
  const DyadicReport dy = dyadic_decomposition_check(a, difference_set(a, b));
  json doc = {{"E2_A", energy_exact(rep_function(a, a), 2).get_str()},
              {"E3_A", energy_exact(rep_function(a, a), 3).get_str()},
              {"difference_set_size", difference_set(a, a).size()},
              {"dyadic", to_json(dy)}};
  json arr = json::array();
  for (const CheckReport& r : rows) arr.push_back(to_json(r));
  doc["checks"] = arr;
  emit(g, "energy", doc);
  const int code = exit_for(rows);
  return code != 0 || !dy.ok() ? 1 : 0;
}

int cmd_sweep(const Global& g, const std::string& config_path, bool seed_given, bool precision_given,
              bool timing) {
  ExperimentConfig config = load_config(config_path);
  if (seed_given) config.seed = g.seed;
  if (precision_given) config.precision_cap = g.precision_bits;
  if (!g.out_dir.empty()) config.out_dir = g.out_dir;
  if (timing) config.record_timing = true;
  validate(config);
  const ExperimentResult result = run_experiment(config);
  write_experiment(result, config, config.out_dir);
  std::size_t rows = 0, violated = 0, undecided = 0;
  for (const SizeResult& s : result.sizes) {
    for (const CheckReport& r : s.rows) {
      ++rows;
      violated += r.failed() ? 1 : 0;
      undecided += r.verdict == Verdict::Undecided ? 1 : 0;
    }
  }
  std::cout << "sizes=" << result.sizes.size() << " rows=" << rows << " violated=" << violated
            << " undecided=" << undecided << " digest=" << result.config_digest << " out=" << config.out_dir << "\n";
  if (undecided > 0) std::cerr << "warning: " << undecided << " UNDECIDED comparisons\n";
  return result.any_violated() ? 1 : 0;
}

PowerTerm parse_term(const std::string& text) {
  const std::vector<Scalar> v = parse_list(text);
  if (v.size() != 2) throw std::invalid_argument("a term is m_exp,n_exp");
  return {v[0], v[1]};
}

int cmd_balance(const Global& g, const std::string& derive, const std::string& lhs_text,
                const std::vector<std::string>& term_texts) {
  json doc;
  PowerTerm lhs;
  std::vector<PowerTerm> terms;
  if (!derive.empty()) {
    const RichLineDerivation d = rich_line_derivation(parse_metric(derive));
    json raw = json::array();
    for (const PowerTerm& t : d.raw_terms) raw.push_back(to_display(t));
    doc["metric"] = std::string(to_string(parse_metric(derive)));
    doc["multiplicity_bound"] = to_display(d.multiplicity);
    doc["raw_terms"] = raw;
    lhs = d.lower;
    terms = d.terms;
  } else if (!term_texts.empty()) {
    lhs = parse_term(lhs_text);
    for (const std::string& t : term_texts) terms.push_back(parse_term(t));
  } else {
    lhs = {2, 1};
    terms = {{make_scalar(1, 9), make_scalar(23, 9)},
             {make_scalar(14, 33), make_scalar(76, 33)},
             {make_scalar(-5, 3), make_scalar(11, 3)}};
  }
  const Balance bal = balance_exponents(lhs, terms);
  json per = json::array();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    per.push_back({{"term", to_display(terms[i])}, {"exponent", to_string(bal.per_term[i])}});
  }
  doc["lhs"] = to_display(lhs);
  doc["per_term"] = per;
  doc["max"] = to_string(bal.max);
  emit(g, "balance", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments around distinct distances, quadruple censuses and additive energies"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Seed for generators and sampling")->capture_default_str();
  app.add_option("--precision-bits", g.precision_bits, "Cap for adaptive interval precision")
      ->check(CLI::Range(64U, 1U << 20))
      ->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for JSON/CSV artifacts");

  std::string input, metric = "euclidean-squared", kappa_text;
  const auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--input,-i", input, "Point-set JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--metric", metric, "euclidean-squared | rectangular | minkowski-squared")->capture_default_str();
    sub->add_option("--kappa", kappa_text, "Slope of the line y = kappa x carrying A (rectangular)");
  };

  auto* gen = app.add_subcommand("gen", "Generate a point set");
  std::string kind = "grid", eps = "1/6", line = "1,-1,0";
  std::int64_t n = 16, a = 0, b = 0, bound = 20, m = 4;
  gen->add_option("--generator", kind, "grid | unbalanced | random | line")->capture_default_str();
  gen->add_option("--n", n, "Number of points")->capture_default_str();
  gen->add_option("--a", a, "Grid width (overrides --n)");
  gen->add_option("--b", b, "Grid height (overrides --n)");
  gen->add_option("--eps", eps, "Exponent of the short side (unbalanced)")->capture_default_str();
  gen->add_option("--bound", bound, "Coordinate bound (random, line)")->capture_default_str();
  gen->add_option("--line", line, "Line a,b,c for ax + by = c (line)")->capture_default_str();
  gen->add_option("--m", m, "Points on the line (line)")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Distance profile and richest line");
  bool exclude_zero = false, csv = false;
  unsigned workers = 1;
  add_instance(stats);
  stats->add_flag("--exclude-zero", exclude_zero, "Do not count a zero value as a distance");
  stats->add_flag("--csv", csv, "One CSV summary row instead of JSON");
  stats->add_option("--workers", workers, "Threads for pair enumeration")->capture_default_str();

  auto* census = app.add_subcommand("census", "Quadruple census on the richest line");
  add_instance(census);

  auto* family = app.add_subcommand("family", "Curve family, incidences and coincidences");
  std::uint64_t sample = 2000;
  add_instance(family);
  family->add_option("--sample", sample, "Curve pairs checked for the two-point property")->capture_default_str();

  auto* energy = app.add_subcommand("energy", "Energy inequalities on finite sets of rationals");
  std::string a_text, b_text, c_text;
  std::uint64_t t = 2;
  energy->add_option("--a", a_text, "Comma-separated set A")->required();
  energy->add_option("--b", b_text, "Comma-separated set B (defaults to A)");
  energy->add_option("--c", c_text, "Comma-separated set C for the rich-point containment");
  energy->add_option("--t", t, "Richness threshold")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Run a configured experiment sweep");
  std::string config_path;
  bool timing = false;
  sweep->add_option("--config,-c", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_flag("--timing", timing, "Fill the seconds column (breaks byte-identical reruns)");

  auto* balance = app.add_subcommand("balance", "Solve power-law balances for m = n^e");
  std::string derive, lhs_text = "2,1";
  std::vector<std::string> term_texts;
  balance->add_option("--derive", derive, "Run the full derivation for a metric");
  balance->add_option("--lhs", lhs_text, "Left side as m_exp,n_exp")->capture_default_str();
  balance->add_option("--term", term_texts, "A right-side term m_exp,n_exp (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<Scalar> kappa;
    if (!kappa_text.empty()) kappa = parse_scalar(kappa_text);
    if (*gen) return cmd_gen(g, kind, n, a, b, eps, bound, line, m);
    if (*stats) return cmd_stats(g, input, metric, exclude_zero, csv, workers);
    if (*census) return cmd_census(g, input, metric, kappa);
    if (*family) return cmd_family(g, input, metric, kappa, sample);
    if (*energy) return cmd_energy(g, a_text, b_text, c_text, t);
    if (*sweep) {
      return cmd_sweep(g, config_path, app.get_option("--seed")->count() > 0,
                       app.get_option("--precision-bits")->count() > 0, timing);
    }
    if (*balance) return cmd_balance(g, derive, lhs_text, term_texts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
