#include "steklov/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>

#include <Eigen/Eigenvalues>

#include "steklov/error.hpp"
#include "steklov/random.hpp"

namespace steklov {

namespace {

using Triplet = Eigen::Triplet<double>;

struct TriangleGeometry {
  double area = 0.0;
  // cot[c]: cotangent of the angle at corner c, opposite edge (c+1, c+2).
  std::array<double, 3> cot{};
};

TriangleGeometry triangle_geometry(const IntrinsicMesh& m, std::size_t f) {
  const Triangle& t = m.triangles[f];
  std::array<double, 3> l;
  for (int c = 0; c < 3; ++c) l[c] = m.length(t[(c + 1) % 3], t[(c + 2) % 3]);
  const double longest = std::max({l[0], l[1], l[2]});
  const double margin = std::min({l[1] + l[2] - l[0], l[0] + l[2] - l[1], l[0] + l[1] - l[2]});
  if (!(margin > 1e-12 * longest))
    throw Error(ErrorKind::DegenerateTriangle, "triangle " + std::to_string(f) + " is degenerate");

  // Kahan's arrangement of Heron's formula.
  std::array<double, 3> s = l;
  std::sort(s.begin(), s.end(), std::greater<>());
  const double a = s[0], b = s[1], c = s[2];
  const double area =
      0.25 * std::sqrt((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)));

  TriangleGeometry g;
  g.area = area;
  for (int k = 0; k < 3; ++k) {
    const double opp = l[k], p = l[(k + 1) % 3], q = l[(k + 2) % 3];
    g.cot[k] = (p * p + q * q - opp * opp) / (4.0 * area);
  }
  return g;
}

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> x) {
  const double cutoff = 1e-8 * x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > cutoff) {
      if (x[i] < 0) x = -x;
      return;
    }
  }
}

SparseMatrix principal_block(const SparseMatrix& a, const std::vector<int>& rows_of,
                             const std::vector<int>& cols_of, int n_rows, int n_cols) {
  std::vector<Triplet> trip;
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int r = rows_of[it.row()], c = cols_of[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SparseMatrix out(n_rows, n_cols);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

struct PencilResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;
  int iterations = 0;
};

double residual_norm(const Eigen::VectorXd& r, const Eigen::VectorXd& x, const std::vector<int>& rows) {
  if (rows.empty()) return r.norm() / std::max(x.norm(), 1e-300);
  double rn = 0.0, xn = 0.0;
  for (int i : rows) {
    rn += r[i] * r[i];
    xn += x[i] * x[i];
  }
  return std::sqrt(rn) / std::max(std::sqrt(xn), 1e-300);
}

// Smallest eigenpairs of K x = lambda B x (K, B symmetric PSD with K + shift*B
// definite) by shift-invert subspace iteration with Rayleigh-Ritz.
// `rank` bounds the block size (rank of B); residuals are measured on `rows`.
PencilResult shift_invert_subspace(const SparseMatrix& K, const SparseMatrix& B, int nev, int rank,
                                   const EigenOptions& opts, const std::vector<int>& rows) {
  const int n = static_cast<int>(K.rows());
  const int block = std::min(rank, std::max(2 * nev, nev + 8));
  if (block < nev) throw Error(ErrorKind::InvalidParams, "more eigenpairs requested than unknowns");

  SparseMatrix shifted = K + opts.shift * B;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::SingularInterior, "shifted operator factorization failed");

  Rng rng(derive_seed(0x5eed, "subspace", static_cast<std::uint64_t>(n)));
  Eigen::MatrixXd X(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = rng.symmetric();

  PencilResult out;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Eigen::MatrixXd Y = solver.solve(B * X);
    for (int j = 0; j < block; ++j) Y.col(j).normalize();
    Eigen::MatrixXd KY = K * Y;
    Eigen::MatrixXd BY = B * Y;
    Eigen::MatrixXd Ka = Y.transpose() * KY;
    Eigen::MatrixXd Ba = Y.transpose() * BY;
    Ka = 0.5 * (Ka + Ka.transpose()).eval();
    Ba = 0.5 * (Ba + Ba.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Ka, Ba);
    if (ritz.info() != Eigen::Success)
      throw Error(ErrorKind::ConvergenceFailure, "Rayleigh-Ritz step failed");
    X = Y * ritz.eigenvectors();
    Eigen::MatrixXd KX = KY * ritz.eigenvectors();
    Eigen::MatrixXd BX = BY * ritz.eigenvectors();

    out.values = ritz.eigenvalues().head(nev);
    out.residuals.assign(nev, 0.0);
    bool converged = true;
    for (int j = 0; j < nev; ++j) {
      Eigen::VectorXd r = KX.col(j) - out.values[j] * BX.col(j);
      out.residuals[j] = residual_norm(r, X.col(j), rows);
      if (out.residuals[j] > opts.tol_res) converged = false;
    }
    out.iterations = it;
    if (converged) {
      out.vectors = X.leftCols(nev);
      return out;
    }
  }
  double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", worst);
  throw Error(ErrorKind::ConvergenceFailure, "subspace iteration reached " +
                                                 std::to_string(opts.max_iterations) +
                                                 " iterations with residual " + buf);
}

void check_zero_mode(SteklovSpectrum& spec, const Eigen::VectorXd& zero_vector) {
  const double s0 = spec.sigmas.at(0);
  const double s1 = spec.sigmas.size() > 1 ? spec.sigmas[1] : 0.0;
  const double spread = (zero_vector.array() - zero_vector.mean()).matrix().norm();
  if (std::abs(s0) > 1e-6 * std::max(1.0, s1) || spread > 1e-6 * zero_vector.norm())
    throw Error(ErrorKind::ConvergenceFailure, "lowest eigenpair is not the constant mode");
}

}  // namespace

SparseMatrix assemble_stiffness(const IntrinsicMesh& m) {
  std::vector<Triplet> trip;
  trip.reserve(m.triangles.size() * 12);
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const Triangle& t = m.triangles[f];
    const TriangleGeometry g = triangle_geometry(m, f);
    for (int c = 0; c < 3; ++c) {
      const int i = t[(c + 1) % 3], j = t[(c + 2) % 3];
      const double w = 0.5 * g.cot[c];
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
    }
  }
  SparseMatrix K(m.n_vertices, m.n_vertices);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd triangle_energies(const IntrinsicMesh& m, const Eigen::VectorXd& f) {
  if (f.size() != m.n_vertices) throw Error(ErrorKind::DimensionMismatch, "field size differs from vertex count");
  Eigen::VectorXd e(m.triangles.size());
  for (std::size_t k = 0; k < m.triangles.size(); ++k) {
    const Triangle& t = m.triangles[k];
    const TriangleGeometry g = triangle_geometry(m, k);
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = f[t[(c + 1) % 3]] - f[t[(c + 2) % 3]];
      sum += 0.5 * g.cot[c] * d * d;
    }
    e[static_cast<Eigen::Index>(k)] = sum;
  }
  return e;
}

SparseMatrix assemble_boundary_mass(const IntrinsicMesh& m, std::span<const std::string> loops,
                                    MassLumping lumping) {
  std::vector<const BoundaryLoop*> selected;
  if (loops.empty()) {
    for (const auto& bl : m.boundary_loops) selected.push_back(&bl);
  } else {
    for (const auto& label : loops) selected.push_back(&m.loop(label));
  }
  std::vector<Triplet> trip;
  for (const BoundaryLoop* bl : selected) {
    const std::size_t len = bl->vertices.size();
    for (std::size_t i = 0; i < len; ++i) {
      const int u = bl->vertices[i], v = bl->vertices[(i + 1) % len];
      const double l = m.length(u, v);
      if (lumping == MassLumping::Consistent) {
        trip.emplace_back(u, u, l / 3.0);
        trip.emplace_back(v, v, l / 3.0);
        trip.emplace_back(u, v, l / 6.0);
        trip.emplace_back(v, u, l / 6.0);
      } else {
        trip.emplace_back(u, u, l / 2.0);
        trip.emplace_back(v, v, l / 2.0);
      }
    }
  }
  SparseMatrix M(m.n_vertices, m.n_vertices);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SparseMatrix assemble_lumped_mass(const IntrinsicMesh& m) {
  std::vector<Triplet> trip;
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const double a = triangle_geometry(m, f).area / 3.0;
    for (int v : m.triangles[f]) trip.emplace_back(v, v, a);
  }
  SparseMatrix M(m.n_vertices, m.n_vertices);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

BoundaryCondition BoundaryCondition::all_steklov(const IntrinsicMesh& m) {
  BoundaryCondition bc;
  for (const auto& bl : m.boundary_loops) bc.loops[bl.label] = LoopCondition::Steklov;
  return bc;
}

BoundaryCondition BoundaryCondition::sloshing(const IntrinsicMesh& m, const std::string& steklov_loop) {
  m.loop(steklov_loop);
  BoundaryCondition bc;
  for (const auto& bl : m.boundary_loops)
    bc.loops[bl.label] = bl.label == steklov_loop ? LoopCondition::Steklov : LoopCondition::Neumann;
  return bc;
}

std::vector<std::string> BoundaryCondition::steklov_loops() const {
  std::vector<std::string> out;
  for (const auto& [label, cond] : loops)
    if (cond == LoopCondition::Steklov) out.push_back(label);
  return out;
}

void validate(const EigenOptions& opts) {
  if (opts.n_eigs < 2 || !(opts.tol_res > 0.0) || opts.max_iterations < 1 ||
      opts.dense_fallback_threshold < 0 || !(opts.shift > 0.0))
    throw Error(ErrorKind::InvalidParams, "eigen options need n_eigs >= 2 and positive tolerances");
}

DtnSolver::DtnSolver(const IntrinsicMesh& m, std::span<const std::string> steklov_loops)
    : n_vertices_(m.n_vertices) {
  if (steklov_loops.empty()) throw Error(ErrorKind::InvalidParams, "no Steklov loop selected");
  std::vector<char> on_boundary(m.n_vertices, 0);
  for (const auto& label : steklov_loops)
    for (int v : m.loop(label).vertices) on_boundary[v] = 1;

  std::vector<int> bpos(m.n_vertices, -1), ipos(m.n_vertices, -1);
  for (int v = 0; v < m.n_vertices; ++v) {
    if (on_boundary[v]) {
      bpos[v] = static_cast<int>(boundary_.size());
      boundary_.push_back(v);
    } else {
      ipos[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }

  // Every vertex must be connected to a Steklov vertex, else K_ii is singular.
  std::vector<std::vector<int>> adj(m.n_vertices);
  for (const auto& t : m.triangles)
    for (int c = 0; c < 3; ++c) {
      adj[t[c]].push_back(t[(c + 1) % 3]);
      adj[t[(c + 1) % 3]].push_back(t[c]);
    }
  std::vector<char> reached(on_boundary);
  std::queue<int> frontier;
  for (int v : boundary_) frontier.push(v);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[v])
      if (!reached[w]) {
        reached[w] = 1;
        frontier.push(w);
      }
  }
  for (int v = 0; v < m.n_vertices; ++v)
    if (!reached[v])
      throw Error(ErrorKind::SingularInterior,
                  "vertex " + std::to_string(v) + " lies in a component without Steklov boundary");

  stiffness_ = assemble_stiffness(m);
  mass_full_ = assemble_boundary_mass(m, steklov_loops);
  const int nb = static_cast<int>(boundary_.size()), ni = static_cast<int>(interior_.size());
  mass_bb_ = principal_block(mass_full_, bpos, bpos, nb, nb);
  k_bb_ = principal_block(stiffness_, bpos, bpos, nb, nb);
  k_ib_ = principal_block(stiffness_, ipos, bpos, ni, nb);
  if (ni > 0) {
    SparseMatrix k_ii = principal_block(stiffness_, ipos, ipos, ni, ni);
    interior_solver_.compute(k_ii);
    if (interior_solver_.info() != Eigen::Success)
      throw Error(ErrorKind::SingularInterior, "interior stiffness factorization failed");
    const Eigen::VectorXd d = interior_solver_.vectorD();
    if (!(d.minCoeff() > 1e-14 * d.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::SingularInterior, "interior stiffness block is singular");
  }
}

Eigen::MatrixXd DtnSolver::schur() const {
  const int nb = static_cast<int>(boundary_.size());
  Eigen::MatrixXd S = Eigen::MatrixXd(k_bb_);
  if (!interior_.empty()) {
    constexpr int kBlock = 64;
    for (int start = 0; start < nb; start += kBlock) {
      const int width = std::min(kBlock, nb - start);
      Eigen::MatrixXd rhs = Eigen::MatrixXd(k_ib_.middleCols(start, width));
      Eigen::MatrixXd x = interior_solver_.solve(rhs);
      S.middleCols(start, width).noalias() -= k_ib_.transpose() * x;
    }
  }
  return 0.5 * (S + S.transpose());
}

Eigen::VectorXd DtnSolver::apply_schur(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = k_bb_ * u;
  if (!interior_.empty()) {
    Eigen::VectorXd fi = interior_solver_.solve(Eigen::VectorXd(k_ib_ * u));
    out -= k_ib_.transpose() * fi;
  }
  return out;
}

Eigen::VectorXd DtnSolver::extend(const Eigen::VectorXd& u) const {
  if (u.size() != static_cast<Eigen::Index>(boundary_.size()))
    throw Error(ErrorKind::DimensionMismatch, "boundary data has the wrong length");
  Eigen::VectorXd f(n_vertices_);
  for (std::size_t i = 0; i < boundary_.size(); ++i) f[boundary_[i]] = u[static_cast<Eigen::Index>(i)];
  if (!interior_.empty()) {
    Eigen::VectorXd fi = -interior_solver_.solve(Eigen::VectorXd(k_ib_ * u));
    for (std::size_t i = 0; i < interior_.size(); ++i) f[interior_[i]] = fi[static_cast<Eigen::Index>(i)];
  }
  return f;
}

Eigen::VectorXd DtnSolver::restrict_to_boundary(const Eigen::VectorXd& f) const {
  if (f.size() != n_vertices_) throw Error(ErrorKind::DimensionMismatch, "field size differs from vertex count");
  Eigen::VectorXd u(boundary_.size());
  for (std::size_t i = 0; i < boundary_.size(); ++i) u[static_cast<Eigen::Index>(i)] = f[boundary_[i]];
  return u;
}

Eigen::MatrixXd dtn_schur(const IntrinsicMesh& m, std::span<const std::string> steklov_loops) {
  return DtnSolver(m, steklov_loops).schur();
}

SteklovSpectrum mixed_spectrum(const IntrinsicMesh& m, const BoundaryCondition& bc, const EigenOptions& opts) {
  validate(opts);
  for (const auto& [label, cond] : bc.loops) m.loop(label);
  const std::vector<std::string> steklov = bc.steklov_loops();
  if (steklov.empty()) throw Error(ErrorKind::InvalidParams, "boundary condition has no Steklov loop");

  DtnSolver dtn(m, steklov);
  const int nb = static_cast<int>(dtn.boundary_vertices().size());
  const int nev = std::min(opts.n_eigs, nb);

  SteklovSpectrum spec;
  spec.mesh_id = mesh_fingerprint(m);
  spec.problem = steklov.size() == m.boundary_loops.size() ? "steklov" : "sloshing";
  spec.boundary_vertices = dtn.boundary_vertices();
  spec.n_boundary_unknowns = nb;

  if (nb <= opts.dense_fallback_threshold) {
    const Eigen::MatrixXd S = dtn.schur();
    const Eigen::MatrixXd Mb = Eigen::MatrixXd(dtn.boundary_mass());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S, Mb);
    if (ges.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "dense DtN eigensolve failed");
    spec.solver = "dense";
    spec.boundary_vectors = ges.eigenvectors().leftCols(nev);
    for (int j = 0; j < nev; ++j) {
      canonicalize_sign(spec.boundary_vectors.col(j));
      const double sigma = ges.eigenvalues()[j];
      const Eigen::VectorXd u = spec.boundary_vectors.col(j);
      spec.sigmas.push_back(sigma);
      spec.residuals.push_back((S * u - sigma * (Mb * u)).norm() / u.norm());
    }
  } else {
    std::vector<int> rows = dtn.boundary_vertices();
    PencilResult r = shift_invert_subspace(dtn.stiffness(), dtn.boundary_mass_full(), nev, nb, opts, rows);
    spec.solver = "iterative";
    spec.iterations = r.iterations;
    spec.boundary_vectors.resize(nb, nev);
    for (int j = 0; j < nev; ++j) {
      Eigen::VectorXd x = r.vectors.col(j);
      canonicalize_sign(x);
      spec.boundary_vectors.col(j) = dtn.restrict_to_boundary(x);
      spec.sigmas.push_back(r.values[j]);
      // Residual on the boundary rows is S u - sigma M u.
      const Eigen::VectorXd u = spec.boundary_vectors.col(j);
      spec.residuals.push_back((dtn.apply_schur(u) - r.values[j] * (dtn.boundary_mass() * u)).norm() / u.norm());
    }
  }
  for (std::size_t j = 0; j < spec.residuals.size(); ++j)
    if (!(spec.residuals[j] <= opts.tol_res))
      throw Error(ErrorKind::ConvergenceFailure, "eigenpair " + std::to_string(j) + " residual " +
                                                     std::to_string(spec.residuals[j]) + " above tolerance");

  spec.interior_extensions.resize(m.n_vertices, nev);
  for (int j = 0; j < nev; ++j) spec.interior_extensions.col(j) = dtn.extend(spec.boundary_vectors.col(j));
  check_zero_mode(spec, spec.boundary_vectors.col(0));
  return spec;
}

SteklovSpectrum steklov_spectrum(const IntrinsicMesh& m, const EigenOptions& opts) {
  if (m.boundary_loops.empty()) throw Error(ErrorKind::InvalidParams, "mesh has no boundary");
  return mixed_spectrum(m, BoundaryCondition::all_steklov(m), opts);
}

double sloshing_mu1(const IntrinsicMesh& cylinder, const BoundaryCondition& bc, const EigenOptions& opts) {
  if (bc.steklov_loops().size() != 1)
    throw Error(ErrorKind::InvalidParams, "sloshing needs exactly one Steklov loop");
  SteklovSpectrum spec = mixed_spectrum(cylinder, bc, opts);
  return spec.sigma1();
}

SteklovSpectrum neumann_spectrum(const IntrinsicMesh& m, const EigenOptions& opts) {
  validate(opts);
  const SparseMatrix K = assemble_stiffness(m);
  const SparseMatrix M = assemble_lumped_mass(m);
  const int n = m.n_vertices;
  const int nev = std::min(opts.n_eigs, n);

  SteklovSpectrum spec;
  spec.mesh_id = mesh_fingerprint(m);
  spec.problem = "neumann";
  spec.boundary_vertices.resize(n);
  std::iota(spec.boundary_vertices.begin(), spec.boundary_vertices.end(), 0);
  spec.n_boundary_unknowns = n;

  if (n <= opts.dense_fallback_threshold) {
    const Eigen::MatrixXd Kd = Eigen::MatrixXd(K), Md = Eigen::MatrixXd(M);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kd, Md);
    if (ges.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "dense Neumann eigensolve failed");
    spec.solver = "dense";
    spec.boundary_vectors = ges.eigenvectors().leftCols(nev);
    for (int j = 0; j < nev; ++j) {
      canonicalize_sign(spec.boundary_vectors.col(j));
      const Eigen::VectorXd x = spec.boundary_vectors.col(j);
      spec.sigmas.push_back(ges.eigenvalues()[j]);
      spec.residuals.push_back((K * x - spec.sigmas.back() * (M * x)).norm() / x.norm());
    }
  } else {
    PencilResult r = shift_invert_subspace(K, M, nev, n, opts, {});
    spec.solver = "iterative";
    spec.iterations = r.iterations;
    spec.boundary_vectors = r.vectors;
    for (int j = 0; j < nev; ++j) {
      canonicalize_sign(spec.boundary_vectors.col(j));
      spec.sigmas.push_back(r.values[j]);
    }
    spec.residuals = r.residuals;
  }
  for (std::size_t j = 0; j < spec.residuals.size(); ++j)
    if (!(spec.residuals[j] <= opts.tol_res))
      throw Error(ErrorKind::ConvergenceFailure, "Neumann eigenpair " + std::to_string(j) + " above tolerance");
  spec.interior_extensions = spec.boundary_vectors;
  check_zero_mode(spec, spec.boundary_vectors.col(0));
  return spec;
}

double neumann_lambda1(const IntrinsicMesh& m, const EigenOptions& opts) {
  return neumann_spectrum(m, opts).sigma1();
}

Eigen::VectorXd harmonic_extension(const IntrinsicMesh& m, const Eigen::VectorXd& boundary_values) {
  if (boundary_values.size() != m.n_vertices)
    throw Error(ErrorKind::DimensionMismatch, "boundary values must be a full-length vertex vector");
  std::vector<std::string> labels;
  for (const auto& bl : m.boundary_loops) labels.push_back(bl.label);
  DtnSolver dtn(m, labels);
  return dtn.extend(dtn.restrict_to_boundary(boundary_values));
}

RayleighQuotient rayleigh_quotient(const IntrinsicMesh& m, const Eigen::VectorXd& f,
                                   std::span<const std::string> loops) {
  if (f.size() != m.n_vertices) throw Error(ErrorKind::DimensionMismatch, "field size differs from vertex count");
  const SparseMatrix K = assemble_stiffness(m);
  const SparseMatrix M = assemble_boundary_mass(m, loops);
  RayleighQuotient rq;
  rq.energy = f.dot(K * f);
  const Eigen::VectorXd Mf = M * f;
  rq.boundary_norm = f.dot(Mf);
  if (!(rq.boundary_norm > 0.0)) throw Error(ErrorKind::ZeroBoundaryNorm, "field vanishes on the selected loops");
  rq.quotient = rq.energy / rq.boundary_norm;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
  rq.boundary_mean = ones.dot(Mf) / ones.dot(M * ones);
  return rq;
}

std::string mesh_fingerprint(const IntrinsicMesh& m) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(to_imesh_text(m))));
  return buf;
}

}  // namespace steklov
