#include "ddlab/experiment.hpp"
#include "ddlab/exponents.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

using namespace ddlab;

namespace {

// The three surviving incidence terms after substituting k ~ (n/m)^{11/3},
// |Pi| = m^2, |Gamma| = n^2.
std::vector<PowerTerm> three_terms() {
  return {PowerTerm(make_scalar(1, 9), make_scalar(23, 9)), PowerTerm(make_scalar(14, 33), make_scalar(76, 33)),
          PowerTerm(make_scalar(-5, 3), make_scalar(11, 3))};
}

PowerTerm m2n() { return PowerTerm(Scalar(2), Scalar(1)); }

ExperimentConfig grid_config() {
  ExperimentConfig c;
  c.metrics = {Metric::EuclideanSq, Metric::Rectangular};
  c.kappa = Scalar(1);
  c.sizes = {9, 16, 25, 36};
  c.seed = 7;
  c.workers = 2;
  return c;
}

}  // namespace

TEST(Balance, ThreeTerms) {
  const Balance b = balance_exponents(m2n(), three_terms());
  EXPECT_EQ(b.max, make_scalar(43, 52));
  ASSERT_EQ(b.per_term.size(), 3u);
  EXPECT_EQ(b.per_term[0], make_scalar(14, 17));
  EXPECT_EQ(b.per_term[1], make_scalar(43, 52));
  EXPECT_EQ(b.per_term[2], make_scalar(8, 11));
}

TEST(Balance, OrderInvariant) {
  std::vector<PowerTerm> terms = three_terms();
  std::sort(terms.begin(), terms.end(), [](const PowerTerm& l, const PowerTerm& r) { return l.m_exp < r.m_exp; });
  do {
    const Balance b = balance_exponents(m2n(), terms);
    EXPECT_EQ(b.max, make_scalar(43, 52));
    std::set<Scalar> per(b.per_term.begin(), b.per_term.end());
    EXPECT_EQ(per, (std::set<Scalar>{make_scalar(14, 17), make_scalar(43, 52), make_scalar(8, 11)}));
  } while (std::next_permutation(terms.begin(), terms.end(),
                                 [](const PowerTerm& l, const PowerTerm& r) { return l.m_exp < r.m_exp; }));
}

TEST(Balance, EdgeCases) {
  EXPECT_EQ(balance_exponent(m2n(), power_of_n(3)), Scalar(1));
  EXPECT_THROW(balance_exponent(m2n(), PowerTerm(Scalar(2), Scalar(5))), std::invalid_argument);
  EXPECT_THROW(balance_exponents(m2n(), {}), std::invalid_argument);
}

TEST(Balance, SubsumedTermsDropped) {
  // n^2 is below m^{-5/3} n^{11/3} at both m = 1 and m = n.
  const std::vector<PowerTerm> kept = drop_subsumed({power_of_n(2), PowerTerm(make_scalar(-5, 3), make_scalar(11, 3))});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], PowerTerm(make_scalar(-5, 3), make_scalar(11, 3)));
}

TEST(Balance, RichLineDerivationBothMetrics) {
  for (Metric m : {Metric::EuclideanSq, Metric::Rectangular}) {
    const RichLineDerivation d = rich_line_derivation(m);
    EXPECT_EQ(d.balance.max, make_scalar(43, 52));
    EXPECT_EQ(d.raw_terms.size(), 4u);
    EXPECT_EQ(d.terms, three_terms());
  }
  EXPECT_THROW(rich_line_derivation(Metric::MinkowskiSq), std::invalid_argument);
}

TEST(Config, Validation) {
  ExperimentConfig c = grid_config();
  EXPECT_NO_THROW(validate(c));
  c.kappa = Scalar(0);
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = grid_config();
  c.kappa.reset();
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = grid_config();
  c.sizes = {9, 9, 16};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.sizes = {};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = grid_config();
  c.metrics = {Metric::MinkowskiSq};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = grid_config();
  c.sizes = {10, 6000};
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Config, JsonRoundTripAndDigest) {
  const ExperimentConfig c = grid_config();
  const ExperimentConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_digest(back), config_digest(c));
  ExperimentConfig other = c;
  other.seed = 8;
  EXPECT_NE(config_digest(other), config_digest(c));
  other = c;
  other.workers = 7;
  other.out_dir = "elsewhere";
  EXPECT_EQ(config_digest(other), config_digest(c));
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"sizes": [4, 9], "sedd": 1})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"sizes": [4], "metric": "rectangular", "kappa": 0})")),
               std::invalid_argument);
  const ExperimentConfig parsed =
      config_from_json(nlohmann::json::parse(R"({"sizes": [4], "metric": "rectangular", "kappa": "-1/2"})"));
  EXPECT_EQ(*parsed.kappa, make_scalar(-1, 2));
}

TEST(Generate, GridAndSeeds) {
  const GeneratedSet g = generate(GeneratorSpec{}, 20, 0);
  EXPECT_EQ(g.points.size(), 20u);
  EXPECT_EQ(g.meta["dims"], nlohmann::json::array({4, 5}));
  EXPECT_NE(size_seed(1, 10), size_seed(1, 11));
  GeneratorSpec r;
  r.kind = GeneratorKind::Random;
  r.bound = 10;
  EXPECT_EQ(generate(r, 30, 5).points, generate(r, 30, 5).points);
  GeneratorSpec l;
  l.kind = GeneratorKind::Line;
  l.line = make_line(1, -2, 0);
  l.bound = 30;
  const GeneratedSet lg = generate(l, 40, 3);
  EXPECT_EQ(points_on_line(lg.points, l.line).size(), 10u);
}

TEST(ScalingFit, Examples) {
  std::vector<std::pair<double, double>> quad, constant, products;
  for (double n : {4.0, 8.0, 16.0, 32.0}) {
    quad.emplace_back(n, n * n);
    constant.emplace_back(n, 7.0);
  }
  const ScalingFit q = scaling_fit(quad);
  EXPECT_NEAR(q.exponent, 2.0, 1e-12);
  EXPECT_NEAR(q.residual, 0.0, 1e-12);
  EXPECT_NEAR(scaling_fit(constant).exponent, 0.0, 1e-12);
  for (std::uint64_t k = 4; k <= 64; k *= 2) {
    products.emplace_back(static_cast<double>(k * k), static_cast<double>(product_set_count(k, k)));
  }
  EXPECT_LT(scaling_fit(products).exponent, 1.0);
}

TEST(ScalingFit, DegenerateSeries) {
  EXPECT_THROW(scaling_fit({{1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(scaling_fit({{1, 1}, {2, 0}, {3, 3}}), std::invalid_argument);
  EXPECT_THROW(scaling_fit({{2, 1}, {2, 2}, {2, 3}}), std::invalid_argument);
}

TEST(RunExperiment, GridSweepIsCleanAndDeterministic) {
  const ExperimentConfig c = grid_config();
  const ExperimentResult a = run_experiment(c);
  EXPECT_FALSE(a.any_violated());
  EXPECT_FALSE(a.any_undecided());
  ASSERT_EQ(a.sizes.size(), 4u);
  EXPECT_EQ(a.fits.size(), 3u);
  std::set<std::string> checks;
  for (const SizeResult& s : a.sizes) {
    EXPECT_EQ(s.rows.size(), s.seconds.size());
    for (const CheckReport& r : s.rows) checks.insert(r.check);
  }
  for (const char* name : {"instance", "distinct_distances", "line_richness", "census_total", "cauchy_schwarz",
                           "q1_bound", "census_incidence", "coincidence", "pseudoparabola", "holder_chain_integer"}) {
    EXPECT_TRUE(checks.count(name)) << name;
  }
  ExperimentConfig single = c;
  single.workers = 1;
  const ExperimentResult b = run_experiment(single);
  EXPECT_EQ(render_csv(a, false), render_csv(b, false));
  EXPECT_EQ(render_json(a, c), render_json(b, single));
}

TEST(RunExperiment, RowsCarryDigestAndVersion) {
  ExperimentConfig c = grid_config();
  c.sizes = {4, 9, 16};
  const ExperimentResult r = run_experiment(c);
  const nlohmann::json j = render_json(r, c);
  for (const auto& size : j["sizes"]) {
    for (const auto& row : size["rows"]) {
      EXPECT_EQ(row["config_digest"], r.config_digest);
      EXPECT_EQ(row["code_version"], kCodeVersion);
    }
  }
  const std::string csv = render_csv(r, false);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kReportCsvHeader);
  const auto dir = std::filesystem::temp_directory_path() / "ddlab_test_experiment";
  std::filesystem::remove_all(dir);
  write_experiment(r, c, dir);
  for (const char* f : {"report.csv", "report.json", "size_4.json", "size_9.json", "size_16.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(read_file(dir / "report.csv"), csv);
  std::filesystem::remove_all(dir);
}

TEST(RunExperiment, CsvQuotesFieldsWithCommas) {
  CheckReport r;
  r.check = "x";
  r.lhs = "[1,2]";
  r.rhs_lo = r.rhs_hi = "3";
  EXPECT_EQ(detail::csv_row(r, 1.5, false), "x,none,0,0,\"[1,2]\",3,3,MEASURED,0\n");
  EXPECT_EQ(detail::csv_row(r, 1.5, true), "x,none,0,0,\"[1,2]\",3,3,MEASURED,1.500\n");
}
