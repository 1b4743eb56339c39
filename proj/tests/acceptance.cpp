// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/experiments.hpp"
#include "steklov/fem.hpp"
#include "steklov/graph.hpp"
#include "steklov/random.hpp"
#include "steklov/report.hpp"
#include "steklov/surface.hpp"
#include "test_util.hpp"

using namespace steklov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const GrowthRun& seed7_run() {
  static const GrowthRun run = [] {
    GrowthRunConfig c;
    c.k = 4;
    c.sizes = {8, 12, 16, 24, 32};
    c.gap = 0.2;
    c.seed = 7;
    c.n_b = 16;
    c.resolution = 4;
    return run_growth(c);
  }();
  return run;
}

Outcome genus_formula_check() {
  const FundamentalPiece piece = build_fundamental_piece(4, 16, 4);
  std::ostringstream d;
  bool ok = true;
  for (int n : {4, 8, 12, 16, 24, 32}) {
    GluedSurface s;
    if (n == 4) {
      // No simple 4-regular graph has 4 vertices; use the doubled 4-cycle.
      std::vector<LoopPairing> pairs;
      for (int v = 0; v < 4; ++v) {
        pairs.push_back({v, 0, (v + 1) % 4, 2});
        pairs.push_back({v, 1, (v + 1) % 4, 3});
      }
      s = glue_along_pairings(piece, 4, pairs);
    } else {
      s = glue_surface(piece, sample_expander(n, 4, 0.2, derive_seed(7, "graph", n)));
    }
    const int genus = euler_genus(s.mesh).genus;
    ok = ok && genus == 1 + n && genus_formula(0, 4, n) == 1 + n;
    d << " N=" << n << ":g=" << genus;
  }
  return {ok, d.str()};
}

Outcome disk_oracle() {
  std::vector<double> e1, e3;
  int vertices = 0;
  for (int rings : {10, 20, 41}) {
    const IntrinsicMesh disk = build_disk(rings, 1.0);
    const SteklovSpectrum s = steklov_spectrum(disk);
    e1.push_back(std::abs(s.sigmas[1] - 1.0));
    e3.push_back(std::abs(s.sigmas[3] - 2.0) / 2.0);
    vertices = disk.n_vertices;
  }
  const bool ok = vertices >= 5000 && e1[2] <= 0.01 && e3[2] <= 0.015 && e1[0] > e1[1] && e1[1] > e1[2] &&
                  e3[0] > e3[1] && e3[1] > e3[2];
  return {ok, fmt("V=%d rel err sigma1 %.2e %.2e %.2e, sigma3 %.2e %.2e %.2e", vertices, e1[0], e1[1], e1[2],
                  e3[0], e3[1], e3[2])};
}

Outcome sloshing_oracle() {
  const IntrinsicMesh cyl = build_flat_cylinder(64, 32, 1.0, 1.0);
  const double mu = sloshing_mu1(cyl, BoundaryCondition::sloshing(cyl, "bottom"));
  const double w = 2.0 * std::numbers::pi;
  const double oracle = w * std::tanh(w);
  const double rel = std::abs(mu - oracle) / oracle;
  return {rel <= 0.01, fmt("mu1=%.6f oracle=%.6f rel=%.2e", mu, oracle, rel)};
}

Outcome growth_check() {
  const auto& recs = seed7_run().records;
  std::vector<double> xs, ys;
  bool certified = true, nondecreasing = true;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    xs.push_back(recs[i].n);
    ys.push_back(recs[i].sigma1_times_length);
    certified = certified && recs[i].lambda1_graph >= 0.2;
    if (i > 0) nondecreasing = nondecreasing && ys[i] >= 0.9 * ys[i - 1];
  }
  const double slope = fitted_slope(xs, ys);
  std::ostringstream d;
  d << fmt("slope=%.4f", slope) << " sigma1*L:";
  for (double y : ys) d << fmt(" %.4f", y);
  return {recs.size() == 5 && certified && nondecreasing && slope > 0.0, d.str()};
}

Outcome ratio_check() {
  const RatioReport rr = comparison_ratio_report(seed7_run().records);
  return {rr.alpha_hat > 0.0 && rr.spread <= 10.0,
          fmt("alpha_hat=%.4f beta_hat=%.4f spread=%.4f", rr.alpha_hat, rr.beta_hat, rr.spread)};
}

Outcome kokarev_check() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : seed7_run().records) {
    ok = ok && r.sigma1_times_length <= 8.0 * std::numbers::pi * (r.genus + 1) * 1.01 && check_kokarev(r);
    worst = std::max(worst, r.sigma1_times_length / r.kokarev_bound);
  }
  return {ok, fmt("max sigma1*L / bound = %.4f", worst)};
}

Outcome sandwich_check() {
  bool ok = true;
  double upper = 1e300, lower = 1e300;
  for (const auto& r : seed7_run().records) {
    const double chain = r.lambda1_graph / (r.lambda1_graph / r.mu_collar + r.c_emp * 4);
    ok = ok && r.sigma1 <= r.trial_quotient + 1e-8 && r.sigma1 >= chain - 1e-6;
    upper = std::min(upper, r.trial_quotient - r.sigma1);
    lower = std::min(lower, r.sigma1 - chain);
  }
  return {ok, fmt("min(trial - sigma1)=%.4f min(sigma1 - chain)=%.4f", upper, lower)};
}

Outcome split_estimate_check() {
  bool ok = true;
  double local = 1e300, global = 1e300;
  for (const auto& r : seed7_run().records) {
    ok = ok && r.local_rhs - r.local_lhs >= 0.0 && r.split_rhs - r.split_lhs >= 0.0;
    local = std::min(local, r.local_rhs - r.local_lhs);
    global = std::min(global, r.split_rhs - r.split_lhs);
  }
  return {ok, fmt("min local margin=%.3e min split margin=%.3e", local, global)};
}

Outcome determinism_check() {
  GrowthRunConfig c = seed7_run().config;
  const GrowthRun again = run_growth(c);
  const bool csv = records_csv(again) == records_csv(seed7_run());
  const bool json = report_json_text(again) == report_json_text(seed7_run());
  return {csv && json, fmt("records.csv %s, report.json %s", csv ? "identical" : "differs",
                           json ? "identical" : "differs")};
}

Outcome invariant_suites() {
  constexpr int kCases = 24;
  Rng rng(2024);
  int kernel = 0, dtn = 0, mass = 0, collar = 0, trace = 0;
  for (int i = 0; i < kCases; ++i) {
    const IntrinsicMesh m = testutil::perturbed_rectangle(4 + i % 5, 3 + i % 4, 0.1, derive_seed(1, "mesh", i));
    const SparseMatrix k = assemble_stiffness(m);
    kernel += (k * Eigen::VectorXd::Ones(m.n_vertices)).cwiseAbs().maxCoeff() <= 1e-12;

    const std::vector<std::string> loops{"outer"};
    const DtnSolver solver(m, loops);
    const Eigen::VectorXd u = testutil::random_vector(static_cast<int>(solver.boundary_vertices().size()), rng);
    const Eigen::VectorXd f = solver.extend(u);
    dtn += testutil::relative_gap(u.dot(solver.schur() * u), f.dot(k * f)) <= 1e-10;

    double perimeter = 0.0;
    const auto& outer = m.loop("outer").vertices;
    for (std::size_t j = 0; j < outer.size(); ++j) perimeter += m.length(outer[j], outer[(j + 1) % outer.size()]);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
    mass += std::abs(ones.dot(assemble_boundary_mass(m) * ones) - perimeter) <= 1e-12 * perimeter;

    const int n = 2 * (5 + i % 7);
    const RegularGraph g = sample_expander(n, 4, 1e-6, derive_seed(1, "trace", i));
    const GraphSpectrum spec = laplacian_spectrum(g);
    trace += std::abs(spec.eigenvalues.sum() - 4.0 * n) <= 1e-10 * n &&
             std::abs(spec.eigenvalues.squaredNorm() - 20.0 * n) <= 1e-10 * n;
  }
  const FundamentalPiece piece = build_fundamental_piece(4, 16, 4);
  const GluedSurface s = glue_surface(piece, sample_expander(8, 4, 0.2, derive_seed(7, "graph", 8)));
  for (int i = 0; i < kCases; ++i) {
    const Eigen::VectorXd f = testutil::random_vector(s.mesh.n_vertices, rng);
    const LocalEstimateReport r = verify_local_estimate(s, f, 1.0);
    collar += testutil::relative_gap(r.collar_energy, r.mean_profile_energy + r.fluctuation_energy) <= 1e-8;
  }
  const bool ok = kernel == kCases && dtn == kCases && mass == kCases && collar == kCases && trace == kCases;
  return {ok, fmt("passed of %d: kernel %d, dtn %d, mass %d, collar %d, trace %d", kCases, kernel, dtn, mass,
                  collar, trace)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"genus formula", genus_formula_check},
      {"steklov disk oracle", disk_oracle},
      {"sloshing cylinder oracle", sloshing_oracle},
      {"growth of sigma1*L", growth_check},
      {"ratio pinching", ratio_check},
      {"kokarev bound", kokarev_check},
      {"rayleigh sandwich", sandwich_check},
      {"boundary splitting estimate", split_estimate_check},
      {"determinism", determinism_check},
      {"invariant suites", invariant_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
