#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/graph.hpp"
#include "steklov/surface.hpp"

namespace steklov {

struct GrowthRunConfig {
  int k = 4;
  std::vector<int> sizes{8, 12, 16, 24, 32};
  double gap = 0.2;
  int n_b = 16;
  int resolution = 4;
  EigenOptions eigen{};
  std::uint64_t seed = 7;
  int max_attempts = 1000;
  int jobs = 1;
};

void validate(const GrowthRunConfig& config);

struct GrowthRecord {
  int n = 0;
  double lambda1_graph = 0.0;
  double sigma1 = 0.0;
  double boundary_length = 0.0;
  double sigma1_times_length = 0.0;
  int genus = 0;          // from the glued mesh (Euler characteristic)
  long long genus_formula = 0;
  double ratio = 0.0;     // sigma1 / lambda1_graph
  double kokarev_bound = 0.0;
  double trial_quotient = 0.0;
  double mu_collar = 0.0;
  double c_emp = 0.0;
  double chain_bound = 0.0;  // lambda1 / (lambda1 / mu + c_emp * k)
  double local_lhs = 0.0;    // boundary norm of the fluctuation part
  double local_rhs = 0.0;    // energy / mu
  double split_lhs = 0.0;    // boundary norm of f
  double split_rhs = 0.0;    // q(x_f) / lambda1 + boundary norm of the fluctuation
  double sigma1_residual = 0.0;
  int n_vertices = 0;
  int n_boundary_unknowns = 0;
  // Wall-clock seconds; excluded from every exported artifact.
  double seconds_graph = 0.0;
  double seconds_solve = 0.0;
};

struct LocalEstimateReport {
  double fluctuation_boundary_norm = 0.0;  // sum_v int_{Sigma_v} f~^2
  double energy = 0.0;                     // int |grad f|^2 over the whole surface
  double mu = 0.0;
  double rhs = 0.0;                        // energy / mu
  double margin = 0.0;                     // rhs - lhs
  double max_ring_mean = 0.0;              // largest |ring mean of f~|
  double collar_energy = 0.0;              // sum_v int_{C_v} |grad f|^2
  double mean_profile_energy = 0.0;        // sum_v int_0^1 (f-bar')^2
  double fluctuation_energy = 0.0;         // sum_v int_{C_v} |grad f~|^2
  bool holds = false;
};

struct GlobalEstimateReport {
  Eigen::VectorXd x;               // x_f(v): boundary mean of f on Sigma_v
  double x_sum = 0.0;
  std::vector<double> edge_ratios;  // (x(v)-x(w))^2 / energy on M_v u M_w, per graph edge
  double c_emp = 0.0;
  double q_graph = 0.0;
  double energy = 0.0;
  double global_ratio = 0.0;       // q(x_f) / energy
  double boundary_norm = 0.0;      // int (f - boundary mean of f)^2 over the boundary
  double split_rhs = 0.0;
  double split_margin = 0.0;
  bool holds = false;
};

struct TrialReport {
  Eigen::VectorXd field;
  RayleighQuotient rq;
};

// Ring means of f on collar C_v, one per ring (ring 0 = Sigma_v).
std::vector<double> ring_means(const GluedSurface& s, int v, const Eigen::VectorXd& f);

// f with its ring means removed on every collar (zero elsewhere).
Eigen::VectorXd collar_fluctuation(const GluedSurface& s, const Eigen::VectorXd& f);

double collar_energy(const GluedSurface& s, int v, const Eigen::VectorXd& f);

// f_x: x(v) on Sigma_v, linear down to 0 at the inner end of C_v, 0 elsewhere.
Eigen::VectorXd trial_field(const GluedSurface& s, const Eigen::VectorXd& x);
TrialReport trial_function_quotient(const GluedSurface& s, const Eigen::VectorXd& x);

// Sloshing eigenvalue of the collar of one piece (Steklov on S0, Neumann at
// the inner end).
double collar_mu(const FundamentalPiece& piece, const EigenOptions& opts = {});

// Slack allowed for the inequalities checked below.
inline constexpr double kEstimateSlack = 1e-6;

LocalEstimateReport verify_local_estimate(const GluedSurface& s, const Eigen::VectorXd& f, double mu);

GlobalEstimateReport verify_global_estimate(const GluedSurface& s, double lambda1,
                                            const Eigen::VectorXd& f);

bool check_kokarev(const GrowthRecord& record);

struct RatioReport {
  std::vector<double> ratios;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double spread = 0.0;
};

RatioReport comparison_ratio_report(const std::vector<GrowthRecord>& records);

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

// Constants depending only on the fundamental piece, computed once per run.
struct PieceConstants {
  double mu_collar = 0.0;
  double neumann_lambda1_doubled = 0.0;
  int piece_vertices = 0;
  int piece_triangles = 0;
};

struct GrowthRun {
  GrowthRunConfig config;
  PieceConstants constants;
  std::vector<GrowthRecord> records;
};

// Thrown when a record fails one of its invariants; carries the records
// completed before the failure.
class GrowthAborted : public Error {
 public:
  GrowthAborted(const std::string& message, GrowthRun partial)
      : Error(ErrorKind::InvariantViolated, message), partial_(std::move(partial)) {}
  const GrowthRun& partial() const { return partial_; }

 private:
  GrowthRun partial_;
};

// Everything the growth pipeline computes for one graph size.
GrowthRecord run_single(const GrowthRunConfig& config, const FundamentalPiece& piece, double mu, int n);

// Names the first violated record invariant, or returns an empty string.
std::string record_violation(const GrowthRecord& r, int k);

GrowthRun run_growth(const GrowthRunConfig& config);

}  // namespace steklov
