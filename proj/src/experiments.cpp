#include "steklov/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "steklov/random.hpp"

namespace steklov {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double fluctuation_boundary_norm(const GluedSurface& s, const Eigen::VectorXd& fluct) {
  const SparseMatrix M = assemble_boundary_mass(s.mesh, s.sigma_loops);
  return fluct.dot(M * fluct);
}

// Loop-mass mean of f on each Sigma_v.
Eigen::VectorXd boundary_means(const GluedSurface& s, const Eigen::VectorXd& f) {
  const int n = static_cast<int>(s.sigma_loops.size());
  Eigen::VectorXd x(n);
  for (int v = 0; v < n; ++v) {
    const std::string labels[] = {s.sigma_loops[v]};
    const SparseMatrix M = assemble_boundary_mass(s.mesh, labels);
    const Eigen::VectorXd Mf = M * f;
    x[v] = Mf.sum() / M.sum();
  }
  return x;
}

Eigen::VectorXd piece_energies(const GluedSurface& s, const Eigen::VectorXd& f) {
  const Eigen::VectorXd tri = triangle_energies(s.mesh, f);
  const int n = static_cast<int>(s.sigma_loops.size());
  Eigen::VectorXd e(n);
  for (int v = 0; v < n; ++v) e[v] = tri.segment(s.piece_triangle_begin(v), s.triangles_per_piece).sum();
  return e;
}

}  // namespace

void validate(const GrowthRunConfig& c) {
  if (c.k < 2) throw Error(ErrorKind::InvalidParams, "degree must be at least 2");
  if (c.sizes.empty()) throw Error(ErrorKind::InvalidParams, "no sizes requested");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    if (c.sizes[i] <= c.k || (static_cast<long long>(c.sizes[i]) * c.k) % 2 != 0)
      throw Error(ErrorKind::InvalidParams, "size " + std::to_string(c.sizes[i]) +
                                                " must exceed k with N*k even");
    if (i > 0 && c.sizes[i] <= c.sizes[i - 1])
      throw Error(ErrorKind::InvalidParams, "sizes must be strictly ascending");
  }
  if (!(c.gap > 0.0)) throw Error(ErrorKind::InvalidParams, "gap threshold must be positive");
  if (c.jobs < 1) throw Error(ErrorKind::InvalidParams, "jobs must be at least 1");
  validate(c.eigen);
}

std::vector<double> ring_means(const GluedSurface& s, int v, const Eigen::VectorXd& f) {
  std::vector<double> means;
  for (const auto& ring : s.collar_maps.at(v)) {
    // Rings are uniform, so the loop-mass mean is the vertex average.
    double sum = 0.0;
    for (int id : ring) sum += f[id];
    means.push_back(sum / static_cast<double>(ring.size()));
  }
  return means;
}

Eigen::VectorXd collar_fluctuation(const GluedSurface& s, const Eigen::VectorXd& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  for (int v = 0; v < static_cast<int>(s.collar_maps.size()); ++v) {
    const std::vector<double> means = ring_means(s, v, f);
    const auto& rings = s.collar_maps[v];
    for (std::size_t r = 0; r < rings.size(); ++r)
      for (int id : rings[r]) out[id] = f[id] - means[r];
  }
  return out;
}

double collar_energy(const GluedSurface& s, int v, const Eigen::VectorXd& f) {
  const Eigen::VectorXd tri = triangle_energies(s.mesh, f);
  double e = 0.0;
  for (int t : s.collar_triangles_local) e += tri[s.piece_triangle_begin(v) + t];
  return e;
}

Eigen::VectorXd trial_field(const GluedSurface& s, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(s.collar_maps.size()))
    throw Error(ErrorKind::DimensionMismatch, "trial vector needs one entry per graph vertex");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(s.mesh.n_vertices);
  const int layers = s.collar_layers();
  for (int v = 0; v < static_cast<int>(s.collar_maps.size()); ++v)
    for (int r = 0; r <= layers; ++r)
      for (int id : s.collar_maps[v][r]) f[id] = x[v] * (1.0 - static_cast<double>(r) / layers);
  return f;
}

TrialReport trial_function_quotient(const GluedSurface& s, const Eigen::VectorXd& x) {
  TrialReport out;
  out.field = trial_field(s, x);
  out.rq = rayleigh_quotient(s.mesh, out.field, s.sigma_loops);
  return out;
}

double collar_mu(const FundamentalPiece& piece, const EigenOptions& opts) {
  const Submesh collar = extract_submesh(piece.mesh, piece.collar_triangles);
  return sloshing_mu1(collar.mesh, BoundaryCondition::sloshing(collar.mesh, piece.sigma0_loop), opts);
}

LocalEstimateReport verify_local_estimate(const GluedSurface& s, const Eigen::VectorXd& f, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidParams, "sloshing eigenvalue must be positive");
  LocalEstimateReport rep;
  rep.mu = mu;
  const Eigen::VectorXd fluct = collar_fluctuation(s, f);
  rep.fluctuation_boundary_norm = fluctuation_boundary_norm(s, fluct);
  rep.energy = triangle_energies(s.mesh, f).sum();
  rep.rhs = rep.energy / mu;
  rep.margin = rep.rhs - rep.fluctuation_boundary_norm;

  const int layers = s.collar_layers();
  for (int v = 0; v < static_cast<int>(s.collar_maps.size()); ++v) {
    for (double m : ring_means(s, v, fluct)) rep.max_ring_mean = std::max(rep.max_ring_mean, std::abs(m));
    rep.collar_energy += collar_energy(s, v, f);
    rep.fluctuation_energy += collar_energy(s, v, fluct);
    const std::vector<double> means = ring_means(s, v, f);
    // Collar of unit length and circumference: int_0^1 (f-bar')^2 dr.
    for (int r = 0; r < layers; ++r) {
      const double d = means[r + 1] - means[r];
      rep.mean_profile_energy += d * d * layers;
    }
  }
  rep.holds = rep.margin >= -kEstimateSlack;
  return rep;
}

GlobalEstimateReport verify_global_estimate(const GluedSurface& s, double lambda1, const Eigen::VectorXd& f) {
  if (!(lambda1 > 0.0)) throw Error(ErrorKind::InvalidParams, "graph eigenvalue must be positive");
  GlobalEstimateReport rep;
  rep.x = boundary_means(s, f);
  rep.x_sum = rep.x.sum();
  const Eigen::VectorXd energies = piece_energies(s, f);
  rep.energy = energies.sum();
  for (auto [v, w] : s.graph.edges()) {
    const double d = rep.x[v] - rep.x[w];
    const double e = energies[v] + energies[w];
    const double ratio = e > 0.0 ? d * d / e : 0.0;
    rep.edge_ratios.push_back(ratio);
    rep.c_emp = std::max(rep.c_emp, ratio);
  }
  rep.q_graph = quadratic_form(s.graph, rep.x);
  rep.global_ratio = rep.energy > 0.0 ? rep.q_graph / rep.energy : 0.0;

  const SparseMatrix M = assemble_boundary_mass(s.mesh, s.sigma_loops);
  // Subtracting the boundary mean changes neither q(x_f) nor the fluctuation.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f.size());
  const Eigen::VectorXd centred = f - (ones.dot(M * f) / ones.dot(M * ones)) * ones;
  rep.boundary_norm = centred.dot(M * centred);
  const Eigen::VectorXd fluct = collar_fluctuation(s, f);
  rep.split_rhs = rep.q_graph / lambda1 + fluct.dot(M * fluct);
  rep.split_margin = rep.split_rhs - rep.boundary_norm;
  rep.holds = rep.split_margin >= -kEstimateSlack;
  return rep;
}

bool check_kokarev(const GrowthRecord& record) {
  return record.sigma1_times_length <= 8.0 * std::numbers::pi * (record.genus + 1) * (1.0 + 1e-2);
}

RatioReport comparison_ratio_report(const std::vector<GrowthRecord>& records) {
  if (records.size() < 2)
    throw Error(ErrorKind::InsufficientRecords, "ratio report needs at least two records");
  RatioReport rep;
  for (const auto& r : records) rep.ratios.push_back(r.ratio);
  rep.alpha_hat = *std::min_element(rep.ratios.begin(), rep.ratios.end());
  rep.beta_hat = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.spread = rep.beta_hat / rep.alpha_hat;
  return rep;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::InsufficientRecords, "slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::InvalidParams, "slope fit needs distinct abscissae");
  return sxy / sxx;
}

GrowthRecord run_single(const GrowthRunConfig& config, const FundamentalPiece& piece, double mu, int n) {
  GrowthRecord rec;
  rec.n = n;
  auto start = std::chrono::steady_clock::now();
  ExpanderOptions gopts;
  gopts.max_attempts = config.max_attempts;
  const RegularGraph g = sample_expander(n, config.k, config.gap, derive_seed(config.seed, "graph", n), gopts);
  const GraphSpectrum gs = laplacian_spectrum(g);
  rec.seconds_graph = seconds_since(start);

  start = std::chrono::steady_clock::now();
  const GluedSurface s = glue_surface(piece, g);
  const Topology top = euler_genus(s.mesh);
  rec.genus = top.genus;
  rec.genus_formula = genus_formula(piece.genus0, config.k, n);
  rec.n_vertices = s.mesh.n_vertices;
  for (const auto& bl : s.mesh.boundary_loops) rec.boundary_length += s.mesh.loop_length(bl);

  const SteklovSpectrum spec = steklov_spectrum(s.mesh, config.eigen);
  const Eigen::VectorXd f = spec.interior_extensions.col(1);
  rec.sigma1 = spec.sigma1();
  rec.sigma1_residual = spec.residuals.at(1);
  rec.n_boundary_unknowns = spec.n_boundary_unknowns;
  rec.lambda1_graph = gs.lambda1;
  rec.sigma1_times_length = rec.sigma1 * rec.boundary_length;
  rec.ratio = rec.sigma1 / rec.lambda1_graph;
  rec.kokarev_bound = 8.0 * std::numbers::pi * (rec.genus + 1);
  rec.mu_collar = mu;

  rec.trial_quotient = trial_function_quotient(s, gs.fiedler_vector).rq.quotient;
  const LocalEstimateReport local = verify_local_estimate(s, f, mu);
  const GlobalEstimateReport global = verify_global_estimate(s, gs.lambda1, f);
  rec.local_lhs = local.fluctuation_boundary_norm;
  rec.local_rhs = local.rhs;
  rec.split_lhs = global.boundary_norm;
  rec.split_rhs = global.split_rhs;
  rec.c_emp = global.c_emp;
  rec.chain_bound = gs.lambda1 / (gs.lambda1 / mu + global.c_emp * config.k);
  rec.seconds_solve = seconds_since(start);
  return rec;
}

std::string record_violation(const GrowthRecord& r, int k) {
  if (std::abs(r.boundary_length - r.n) > 1e-6) return "boundary length equals N";
  if (r.genus != r.genus_formula) return "genus of glued mesh matches the genus formula";
  if (!check_kokarev(r)) return "Kokarev bound";
  if (r.sigma1 > r.trial_quotient + 1e-8) return "sigma1 below trial quotient";
  if (r.sigma1 < r.chain_bound - 1e-6) return "sigma1 above the lower-bound chain";
  if (r.local_rhs - r.local_lhs < -kEstimateSlack) return "local estimate";
  if (r.split_rhs - r.split_lhs < -kEstimateSlack) return "boundary norm split";
  (void)k;
  return {};
}

GrowthRun run_growth(const GrowthRunConfig& config) {
  validate(config);
  GrowthRun run;
  run.config = config;

  const FundamentalPiece piece = build_fundamental_piece(config.k, config.n_b, config.resolution);
  run.constants.mu_collar = collar_mu(piece, config.eigen);
  run.constants.neumann_lambda1_doubled = neumann_lambda1(doubled_piece(piece), config.eigen);
  run.constants.piece_vertices = piece.mesh.n_vertices;
  run.constants.piece_triangles = static_cast<int>(piece.mesh.triangles.size());

  const std::size_t count = config.sizes.size();
  std::vector<GrowthRecord> records(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        records[i] = run_single(config, piece, run.constants.mu_collar, config.sizes[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const Error& e) {
        throw GrowthAborted("N=" + std::to_string(config.sizes[i]) + ": " + e.what(), run);
      }
    }
    const std::string violation = record_violation(records[i], config.k);
    if (!violation.empty())
      throw GrowthAborted("N=" + std::to_string(records[i].n) + " violates invariant: " + violation, run);
    run.records.push_back(records[i]);
  }
  return run;
}

}  // namespace steklov
