#include <doctest.h>

#include <cmath>
#include <numbers>

#include "steklov/error.hpp"
#include "steklov/experiments.hpp"
#include "steklov/fem.hpp"
#include "steklov/graph.hpp"
#include "steklov/random.hpp"
#include "steklov/surface.hpp"
#include "test_util.hpp"

using namespace steklov;
using testutil::relative_gap;

namespace {

struct Fixture {
  FundamentalPiece piece = build_fundamental_piece(4, 16, 4);
  RegularGraph graph = sample_expander(8, 4, 0.2, derive_seed(7, "graph", 8));
  GluedSurface surface = glue_surface(piece, graph);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

GrowthRecord passing_record() {
  GrowthRecord r;
  r.n = 8;
  r.genus = 9;
  r.genus_formula = 9;
  r.kokarev_bound = 8.0 * std::numbers::pi * 10.0;
  r.sigma1_times_length = 1.0;
  return r;
}

}  // namespace

TEST_CASE("collar energy splits into mean profile and fluctuation parts") {
  const GluedSurface& s = fixture().surface;
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd f = testutil::random_vector(s.mesh.n_vertices, rng);
    const LocalEstimateReport rep = verify_local_estimate(s, f, 1.0);
    CHECK(relative_gap(rep.collar_energy, rep.mean_profile_energy + rep.fluctuation_energy) < 1e-8);
    CHECK(rep.max_ring_mean <= 1e-10);
  }
}

TEST_CASE("ring means of the fluctuation vanish ring by ring") {
  const GluedSurface& s = fixture().surface;
  Rng rng(2);
  const Eigen::VectorXd f = testutil::random_vector(s.mesh.n_vertices, rng);
  const Eigen::VectorXd fl = collar_fluctuation(s, f);
  for (int v = 0; v < s.graph.num_vertices(); ++v)
    for (double m : ring_means(s, v, fl)) CHECK(std::abs(m) <= 1e-10);
}

TEST_CASE("constant field: both estimates are trivially tight") {
  const GluedSurface& s = fixture().surface;
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(s.mesh.n_vertices);
  const LocalEstimateReport local = verify_local_estimate(s, one, 8.0);
  CHECK(local.fluctuation_boundary_norm == doctest::Approx(0.0));
  CHECK(local.energy == doctest::Approx(0.0));
  CHECK(local.holds);
  const GlobalEstimateReport global = verify_global_estimate(s, 1.0, one);
  CHECK(global.q_graph == doctest::Approx(0.0));
  CHECK(global.holds);
}

TEST_CASE("trial field: linear decay over each collar") {
  const GluedSurface& s = fixture().surface;
  const Eigen::VectorXd x = laplacian_spectrum(s.graph).fiedler_vector;
  const TrialReport t = trial_function_quotient(s, x);
  // Each collar has circumference and length 1, so its energy is x(v)^2.
  double expected = 0.0;
  for (int v = 0; v < 8; ++v) {
    CHECK(collar_energy(s, v, t.field) == doctest::Approx(x[v] * x[v]).epsilon(1e-12));
    expected += x[v] * x[v];
  }
  CHECK(t.rq.energy == doctest::Approx(expected).epsilon(1e-12));
  CHECK(t.rq.boundary_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(t.rq.boundary_mean) < 1e-12);
  const double sigma1 = steklov_spectrum(s.mesh).sigma1();
  CHECK(sigma1 <= t.rq.quotient + 1e-8);
  CHECK_THROWS_AS(trial_field(s, Eigen::VectorXd::Ones(3)), Error);
}

TEST_CASE("estimates hold for the first Steklov eigenfunction") {
  const Fixture& fx = fixture();
  const SteklovSpectrum spec = steklov_spectrum(fx.surface.mesh);
  const Eigen::VectorXd f = spec.interior_extensions.col(1);
  const double mu = collar_mu(fx.piece);
  CHECK(mu > 0.0);
  const LocalEstimateReport local = verify_local_estimate(fx.surface, f, mu);
  CHECK(local.margin >= 0.0);
  const double lambda1 = laplacian_spectrum(fx.graph).lambda1;
  const GlobalEstimateReport global = verify_global_estimate(fx.surface, lambda1, f);
  CHECK(std::abs(global.x_sum) < 1e-10);
  CHECK(global.split_margin >= 0.0);
  CHECK(global.c_emp > 0.0);
  CHECK(global.edge_ratios.size() == fx.graph.edges().size());
}

TEST_CASE("Kokarev check") {
  GrowthRecord r = passing_record();
  CHECK(check_kokarev(r));
  r.sigma1_times_length = r.kokarev_bound * 1.05;
  CHECK_FALSE(check_kokarev(r));
  r.sigma1_times_length = r.kokarev_bound * 1.005;
  CHECK(check_kokarev(r));
  GrowthRecord disk;
  disk.genus = 0;
  disk.kokarev_bound = 8.0 * std::numbers::pi;
  disk.sigma1_times_length = 4.0 * std::numbers::pi * 0.999;
  CHECK(check_kokarev(disk));
}

TEST_CASE("ratio report") {
  std::vector<GrowthRecord> records(1);
  records[0].sigma1 = 1.0;
  records[0].lambda1_graph = 2.0;
  records[0].ratio = 0.5;
  try {
    comparison_ratio_report(records);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientRecords);
  }
  records.push_back(records[0]);
  records.push_back(records[0]);
  const RatioReport rr = comparison_ratio_report(records);
  CHECK(rr.spread == 1.0);
  CHECK(rr.alpha_hat == 0.5);
  CHECK(rr.beta_hat == 0.5);
}

TEST_CASE("least-squares slope") {
  CHECK(fitted_slope({1, 2, 3, 4}, {3, 5, 7, 9}) == doctest::Approx(2.0));
  CHECK(fitted_slope({0, 1, 2}, {1, 0, 1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fitted_slope({1}, {1}), Error);
}

TEST_CASE("config validation") {
  GrowthRunConfig c;
  CHECK_NOTHROW(validate(c));
  c.sizes = {12, 8};
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.k = 3;
  c.sizes = {8, 9};
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.gap = 0.0;
  CHECK_THROWS_AS(validate(c), Error);
  c = {};
  c.jobs = 0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("single-size runs are reproducible and pass their invariants") {
  GrowthRunConfig c;
  c.sizes = {8};
  const GrowthRun a = run_growth(c);
  const GrowthRun b = run_growth(c);
  REQUIRE(a.records.size() == 1);
  const GrowthRecord& r = a.records[0];
  const GrowthRecord& q = b.records[0];
  CHECK(r.sigma1 == q.sigma1);
  CHECK(r.lambda1_graph == q.lambda1_graph);
  CHECK(r.c_emp == q.c_emp);
  CHECK(r.n_vertices == q.n_vertices);
  CHECK(record_violation(r, 4).empty());
  CHECK(r.genus == 9);
  CHECK(r.boundary_length == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("empirical edge constant is stable across sizes") {
  GrowthRunConfig c;
  c.sizes = {8, 16, 32};
  c.jobs = 2;
  const GrowthRun run = run_growth(c);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : run.records) {
    lo = std::min(lo, r.c_emp);
    hi = std::max(hi, r.c_emp);
  }
  CHECK(hi / lo <= 3.0);
}
