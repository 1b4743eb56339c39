#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/fem.hpp"
#include "steklov/surface.hpp"
#include "test_util.hpp"

using namespace steklov;
using testutil::relative_gap;

namespace {

IntrinsicMesh single_triangle(double a, double b, double c) {
  IntrinsicMesh m;
  m.n_vertices = 3;
  m.triangles = {{0, 1, 2}};
  m.edge_lengths = {{{0, 1}, a}, {{1, 2}, b}, {{0, 2}, c}};
  m.boundary_loops = {{"outer", {0, 1, 2}}};
  return m;
}

std::vector<IntrinsicMesh> random_meshes() {
  std::vector<IntrinsicMesh> out;
  for (int i = 0; i < 20; ++i) out.push_back(testutil::perturbed_rectangle(4 + i % 4, 3 + i % 3, 0.1, 1000 + i));
  for (int i = 0; i < 4; ++i) out.push_back(build_flat_cylinder(8 + 2 * i, 3 + i, 1.0 + 0.5 * i, 1.0));
  return out;
}

// Schur complement from the dense gradient stiffness.
Eigen::MatrixXd dense_schur(const IntrinsicMesh& m, const std::vector<int>& bnd, const std::vector<int>& inr) {
  const Eigen::MatrixXd k = testutil::gradient_stiffness(m);
  const int nb = static_cast<int>(bnd.size()), ni = static_cast<int>(inr.size());
  Eigen::MatrixXd kbb(nb, nb), kbi(nb, ni), kii(ni, ni);
  for (int a = 0; a < nb; ++a) {
    for (int b = 0; b < nb; ++b) kbb(a, b) = k(bnd[a], bnd[b]);
    for (int b = 0; b < ni; ++b) kbi(a, b) = k(bnd[a], inr[b]);
  }
  for (int a = 0; a < ni; ++a)
    for (int b = 0; b < ni; ++b) kii(a, b) = k(inr[a], inr[b]);
  if (ni == 0) return kbb;
  return kbb - kbi * kii.ldlt().solve(kbi.transpose());
}

}  // namespace

TEST_CASE("equilateral element matrix") {
  const Eigen::MatrixXd k = assemble_stiffness(single_triangle(1, 1, 1));
  const double off = -1.0 / (2.0 * std::sqrt(3.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(k(i, j) == doctest::Approx(i == j ? -2.0 * off : off).epsilon(1e-14));
}

TEST_CASE("degenerate triangles are rejected") {
  try {
    assemble_stiffness(single_triangle(1.0, 1.0, 2.0));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateTriangle);
    CHECK(e.category() == ErrorCategory::Solver);
  }
}

TEST_CASE("stiffness annihilates constants and matches the gradient assembly") {
  Rng rng(17);
  for (const IntrinsicMesh& m : random_meshes()) {
    const Eigen::MatrixXd k = assemble_stiffness(m);
    const Eigen::MatrixXd oracle = testutil::gradient_stiffness(m);
    CHECK((k * Eigen::VectorXd::Ones(m.n_vertices)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((k - oracle).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd f = testutil::random_vector(m.n_vertices, rng);
    CHECK(triangle_energies(m, f).sum() == doctest::Approx(f.dot(oracle * f)).epsilon(1e-11));
  }
}

TEST_CASE("linear profile on a flat cylinder has energy circumference / length") {
  const IntrinsicMesh cyl = build_flat_cylinder(16, 8, 1.0, 1.0);
  Eigen::VectorXd f(cyl.n_vertices);
  for (int r = 0; r <= 8; ++r)
    for (int i = 0; i < 16; ++i) f[r * 16 + i] = r / 8.0;
  const SparseMatrix k = assemble_stiffness(cyl);
  CHECK(f.dot(k * f) == doctest::Approx(1.0).epsilon(1e-13));
  const IntrinsicMesh wide = build_flat_cylinder(16, 8, 3.0, 2.0);
  Eigen::VectorXd g = f * 2.0;
  CHECK(g.dot(assemble_stiffness(wide) * g) == doctest::Approx(3.0 / 2.0 * 4.0).epsilon(1e-13));
}

TEST_CASE("boundary mass reproduces loop lengths") {
  for (const IntrinsicMesh& m : random_meshes()) {
    double total = 0.0;
    for (const auto& loop : m.boundary_loops) {
      const std::vector<std::string> one{loop.label};
      const SparseMatrix mass = assemble_boundary_mass(m, one);
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
      CHECK(ones.dot(mass * ones) == doctest::Approx(m.loop_length(loop)).epsilon(1e-13));
      total += m.loop_length(loop);
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
    CHECK(ones.dot(assemble_boundary_mass(m) * ones) == doctest::Approx(total).epsilon(1e-13));
    CHECK(ones.dot(assemble_boundary_mass(m, {}, MassLumping::Lumped) * ones) ==
          doctest::Approx(total).epsilon(1e-13));
  }
}

TEST_CASE("consistent boundary mass of a single edge") {
  const IntrinsicMesh m = single_triangle(3.0, 4.0, 5.0);
  const Eigen::MatrixXd mass = assemble_boundary_mass(m);
  // Edge 0-1 of length 3 contributes 1 on the diagonal and 1/2 off it.
  CHECK(mass(0, 1) == doctest::Approx(0.5));
  CHECK(mass(0, 0) == doctest::Approx((3.0 + 5.0) / 3.0));
}

TEST_CASE("DtN energy identity on random meshes") {
  Rng rng(23);
  for (const IntrinsicMesh& m : random_meshes()) {
    const BoundaryCondition bc = BoundaryCondition::all_steklov(m);
    const std::vector<std::string> loops = bc.steklov_loops();
    const DtnSolver dtn(m, loops);
    const Eigen::MatrixXd s = dtn.schur();
    const Eigen::MatrixXd oracle = dense_schur(m, dtn.boundary_vertices(), dtn.interior_vertices());
    CHECK((s - oracle).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, oracle.cwiseAbs().maxCoeff()));
    const Eigen::VectorXd u = testutil::random_vector(static_cast<int>(dtn.boundary_vertices().size()), rng);
    const Eigen::VectorXd f = dtn.extend(u);
    const double energy = triangle_energies(m, f).sum();
    CHECK(relative_gap(u.dot(s * u), energy) < 1e-10);
    CHECK(relative_gap(u.dot(dtn.apply_schur(u)), energy) < 1e-10);
    CHECK((dtn.restrict_to_boundary(f) - u).norm() == 0.0);
    // Harmonic: no residual on interior rows.
    const Eigen::VectorXd kf = dtn.stiffness() * f;
    for (int i : dtn.interior_vertices()) CHECK(std::abs(kf[i]) < 1e-10);
  }
  CHECK(dtn_schur(build_flat_cylinder(8, 2, 1.0, 1.0), std::vector<std::string>{"bottom", "top"}).rows() == 16);
}

TEST_CASE("interior unreachable from the Steklov loops is singular") {
  const IntrinsicMesh cyl = build_flat_cylinder(8, 2, 1.0, 1.0);
  CHECK_THROWS_AS(DtnSolver(cyl, std::vector<std::string>{}), Error);
  CHECK_THROWS_AS(DtnSolver(cyl, std::vector<std::string>{"side"}), Error);
  // Two disjoint disks, only the first one carrying a Steklov loop.
  const IntrinsicMesh disk = build_disk(2, 1.0);
  IntrinsicMesh pair = disk;
  const int off = disk.n_vertices;
  pair.n_vertices = 2 * off;
  for (auto t : disk.triangles) pair.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
  for (const auto& [e, len] : disk.edge_lengths) pair.edge_lengths[EdgeKey(e.a + off, e.b + off)] = len;
  BoundaryLoop second{"other", disk.boundary_loops[0].vertices};
  for (int& v : second.vertices) v += off;
  pair.boundary_loops.push_back(second);
  REQUIRE(validate_mesh(pair).empty());
  try {
    DtnSolver dtn(pair, std::vector<std::string>{"outer"});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularInterior);
    CHECK(e.category() == ErrorCategory::Solver);
  }
}

TEST_CASE("unit disk Steklov spectrum approaches 0, 1, 1, 2, 2") {
  std::vector<double> err1, err3;
  for (int rings : {8, 16, 32}) {
    const SteklovSpectrum s = steklov_spectrum(build_disk(rings, 1.0));
    CHECK(std::abs(s.sigmas[0]) < 1e-9);
    err1.push_back(std::abs(s.sigmas[1] - 1.0));
    err3.push_back(std::abs(s.sigmas[3] - 2.0));
    CHECK(s.sigmas[2] == doctest::Approx(s.sigmas[1]).epsilon(1e-8));
    for (double r : s.residuals) CHECK(r <= 1e-8);
  }
  CHECK(err1[2] < err1[1]);
  CHECK(err1[1] < err1[0]);
  CHECK(err3[2] < err3[1]);
  CHECK(err3[1] < err3[0]);
  CHECK(err1[2] < 1e-3);
}

TEST_CASE("cylinder Steklov: antisymmetric end mode has sigma = 2 / length") {
  const SteklovSpectrum s = steklov_spectrum(build_flat_cylinder(32, 32, 1.0, 1.0));
  CHECK(std::abs(s.sigmas[0]) < 1e-10);
  CHECK(s.sigmas[1] == doctest::Approx(2.0).epsilon(1e-10));
  // Next pair: 2 pi tanh(pi), the symmetric first Fourier mode.
  const double w = 2.0 * std::numbers::pi;
  CHECK(s.sigmas[2] == doctest::Approx(w * std::tanh(w / 2.0)).epsilon(0.02));
}

TEST_CASE("sloshing on a flat cylinder converges to 2 pi tanh(2 pi)") {
  const double w = 2.0 * std::numbers::pi;
  const double oracle = w * std::tanh(w);
  double prev = 1e9;
  for (int nb : {16, 32, 64}) {
    const IntrinsicMesh cyl = build_flat_cylinder(nb, nb / 2, 1.0, 1.0);
    const double mu = sloshing_mu1(cyl, BoundaryCondition::sloshing(cyl, "bottom"));
    const double err = std::abs(mu - oracle);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev / oracle < 0.01);
  const IntrinsicMesh cyl = build_flat_cylinder(8, 2, 1.0, 1.0);
  CHECK_THROWS_AS(sloshing_mu1(cyl, BoundaryCondition::all_steklov(cyl)), Error);
}

TEST_CASE("Neumann spectrum of the unit square") {
  const double lambda1 = neumann_lambda1(build_flat_rectangle(24, 24, 1.0, 1.0));
  CHECK(lambda1 == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("iterative solver agrees with the dense solver") {
  const IntrinsicMesh disk = build_disk(10, 1.0);
  const SteklovSpectrum dense = steklov_spectrum(disk);
  EigenOptions opts;
  opts.dense_fallback_threshold = 10;
  const SteklovSpectrum iter = steklov_spectrum(disk, opts);
  CHECK(dense.solver == "dense");
  CHECK(iter.solver == "iterative");
  REQUIRE(dense.sigmas.size() == iter.sigmas.size());
  for (std::size_t i = 0; i < dense.sigmas.size(); ++i)
    CHECK(iter.sigmas[i] == doctest::Approx(dense.sigmas[i]).epsilon(1e-8));
  for (double r : iter.residuals) CHECK(r <= opts.tol_res);

  const IntrinsicMesh sq = build_flat_rectangle(12, 12, 1.0, 1.0);
  const double nd = neumann_lambda1(sq);
  CHECK(neumann_lambda1(sq, opts) == doctest::Approx(nd).epsilon(1e-8));
}

TEST_CASE("eigenvectors satisfy the Rayleigh identity") {
  const IntrinsicMesh disk = build_disk(8, 1.0);
  const SteklovSpectrum s = steklov_spectrum(disk);
  for (int j = 1; j < 4; ++j) {
    const RayleighQuotient rq = rayleigh_quotient(disk, s.interior_extensions.col(j));
    CHECK(rq.quotient == doctest::Approx(s.sigmas[j]).epsilon(1e-9));
    CHECK(rq.boundary_norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(rq.boundary_mean) < 1e-9);
  }
  try {
    rayleigh_quotient(disk, Eigen::VectorXd::Zero(disk.n_vertices));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroBoundaryNorm);
  }
}

TEST_CASE("harmonic extension reproduces linear data on a flat rectangle") {
  const IntrinsicMesh rect = build_flat_rectangle(6, 5, 1.0, 1.0);
  // Vertex (i, j) sits at (i / 6, j / 5); linear functions are discrete harmonic.
  Eigen::VectorXd full(rect.n_vertices);
  for (int j = 0; j <= 5; ++j)
    for (int i = 0; i <= 6; ++i) full[j * 7 + i] = 2.0 * i / 6.0 - 0.5 * j / 5.0;
  Eigen::VectorXd data = full;
  for (int v = 0; v < rect.n_vertices; ++v) data[v] = 0.0;
  for (int v : rect.boundary_vertices()) data[v] = full[v];
  CHECK((harmonic_extension(rect, data) - full).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigen option validation and fingerprint") {
  EigenOptions bad;
  bad.n_eigs = 1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = {};
  bad.tol_res = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
  const IntrinsicMesh a = build_disk(3, 1.0);
  CHECK(mesh_fingerprint(a) == mesh_fingerprint(build_disk(3, 1.0)));
  CHECK(mesh_fingerprint(a) != mesh_fingerprint(build_disk(3, 2.0)));
  CHECK(mesh_fingerprint(a).rfind("fnv1a64:", 0) == 0);
}
