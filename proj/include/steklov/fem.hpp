#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "steklov/mesh.hpp"

namespace steklov {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Piecewise-linear cotangent stiffness built from edge lengths only.
// Throws DegenerateTriangle when a triangle's inequality margin is below
// 1e-12 of its longest side.
SparseMatrix assemble_stiffness(const IntrinsicMesh& m);

// Dirichlet energy of a P1 field on each triangle (sum equals f^T K f).
Eigen::VectorXd triangle_energies(const IntrinsicMesh& m, const Eigen::VectorXd& f);

enum class MassLumping { Consistent, Lumped };

// 1D P1 mass along the selected loops, embedded in the full vertex space.
// An empty selection means every loop.
SparseMatrix assemble_boundary_mass(const IntrinsicMesh& m, std::span<const std::string> loops = {},
                                    MassLumping lumping = MassLumping::Consistent);

// Diagonal area mass: each vertex receives a third of its triangles' areas.
SparseMatrix assemble_lumped_mass(const IntrinsicMesh& m);

enum class LoopCondition { Steklov, Neumann };

// Per-loop condition; loops not listed are Neumann.
struct BoundaryCondition {
  std::map<std::string, LoopCondition> loops;

  static BoundaryCondition all_steklov(const IntrinsicMesh& m);
  // Steklov on one loop, Neumann elsewhere.
  static BoundaryCondition sloshing(const IntrinsicMesh& m, const std::string& steklov_loop);

  std::vector<std::string> steklov_loops() const;
};

struct EigenOptions {
  int n_eigs = 8;
  double tol_res = 1e-8;
  int max_iterations = 1000;
  int dense_fallback_threshold = 2000;
  // Spectral shift of the shift-invert iteration (applied as K + shift * M).
  double shift = 0.1;
};

void validate(const EigenOptions& opts);

// Elimination of everything off the Steklov loops. Holds the stiffness, the
// interior factorization and the boundary mass; immutable after construction.
class DtnSolver {
 public:
  DtnSolver(const IntrinsicMesh& m, std::span<const std::string> steklov_loops);

  const std::vector<int>& boundary_vertices() const { return boundary_; }
  const std::vector<int>& interior_vertices() const { return interior_; }
  int n_vertices() const { return n_vertices_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  // Boundary mass on the full vertex space.
  const SparseMatrix& boundary_mass_full() const { return mass_full_; }
  // Boundary mass restricted to the Steklov unknowns.
  const SparseMatrix& boundary_mass() const { return mass_bb_; }

  // S = K_bb - K_bi K_ii^{-1} K_ib, symmetrized.
  Eigen::MatrixXd schur() const;
  Eigen::VectorXd apply_schur(const Eigen::VectorXd& u) const;
  // Full-length discrete harmonic extension of boundary data u.
  Eigen::VectorXd extend(const Eigen::VectorXd& u) const;
  // Boundary entries of a full-length vertex vector.
  Eigen::VectorXd restrict_to_boundary(const Eigen::VectorXd& f) const;

 private:
  int n_vertices_ = 0;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  SparseMatrix stiffness_;
  SparseMatrix mass_full_;
  SparseMatrix mass_bb_;
  SparseMatrix k_bb_;
  SparseMatrix k_ib_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> interior_solver_;
};

Eigen::MatrixXd dtn_schur(const IntrinsicMesh& m, std::span<const std::string> steklov_loops);

struct SteklovSpectrum {
  std::string mesh_id;
  std::string problem;  // "steklov", "sloshing" or "neumann"
  std::vector<double> sigmas;  // ascending, sigmas[0] is the verified zero mode
  std::vector<double> residuals;
  // Columns are eigenvectors on boundary_vertices (all vertices for neumann),
  // orthonormal in the problem's mass.
  Eigen::MatrixXd boundary_vectors;
  // Columns are full-length vertex fields (harmonic extensions).
  Eigen::MatrixXd interior_extensions;
  std::vector<int> boundary_vertices;
  int n_boundary_unknowns = 0;
  std::string solver;  // "dense" or "iterative"
  int iterations = 0;

  double sigma1() const { return sigmas.at(1); }
};

// Steklov problem with every boundary loop Steklov.
SteklovSpectrum steklov_spectrum(const IntrinsicMesh& m, const EigenOptions& opts = {});

// Mixed Steklov-Neumann problem.
SteklovSpectrum mixed_spectrum(const IntrinsicMesh& m, const BoundaryCondition& bc,
                               const EigenOptions& opts = {});

// First nonzero sloshing eigenvalue; bc must mark exactly one loop Steklov.
double sloshing_mu1(const IntrinsicMesh& cylinder, const BoundaryCondition& bc,
                    const EigenOptions& opts = {});

// Free-boundary Laplace eigenproblem K f = lambda M f with lumped area mass.
SteklovSpectrum neumann_spectrum(const IntrinsicMesh& m, const EigenOptions& opts = {});
double neumann_lambda1(const IntrinsicMesh& m, const EigenOptions& opts = {});

// Interior values solving K_ii f_i = -K_ib f_b; only the boundary entries of
// boundary_values are read.
Eigen::VectorXd harmonic_extension(const IntrinsicMesh& m, const Eigen::VectorXd& boundary_values);

struct RayleighQuotient {
  double energy = 0.0;
  double boundary_norm = 0.0;
  double quotient = 0.0;
  double boundary_mean = 0.0;  // mass-weighted mean of f over the loops
};

RayleighQuotient rayleigh_quotient(const IntrinsicMesh& m, const Eigen::VectorXd& f,
                                   std::span<const std::string> loops = {});

// Content hash of the mesh file representation ("fnv1a64:<hex>").
std::string mesh_fingerprint(const IntrinsicMesh& m);

}  // namespace steklov
