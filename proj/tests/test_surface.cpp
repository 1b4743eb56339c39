#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/random.hpp"
#include "steklov/surface.hpp"

using namespace steklov;

namespace {

RegularGraph cycle(int n) {
  std::vector<GraphEdge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return build_regular_graph(n, 2, e);
}

}  // namespace

TEST_CASE("fundamental piece has k+1 unit loops and genus zero") {
  for (int k : {2, 3, 4, 5}) {
    const FundamentalPiece p = build_fundamental_piece(k, 16, 3);
    const Topology t = euler_genus(p.mesh);
    CHECK(t.boundary_components == k + 1);
    CHECK(t.genus == 0);
    CHECK(p.degree == k);
    CHECK(p.genus0 == 0);
    CHECK(p.b_loops.size() == static_cast<std::size_t>(k));
    for (const auto& loop : p.mesh.boundary_loops) {
      CHECK(loop.vertices.size() == 16);
      CHECK(p.mesh.loop_length(loop) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("collar is a structured ring stack starting at S0") {
  const FundamentalPiece p = build_fundamental_piece(4, 16, 4);
  REQUIRE(p.collar_rings.size() == 5);
  const auto& s0 = p.mesh.loop(p.sigma0_loop).vertices;
  CHECK(std::set<int>(p.collar_rings[0].begin(), p.collar_rings[0].end()) == std::set<int>(s0.begin(), s0.end()));
  std::set<int> seen;
  for (const auto& ring : p.collar_rings) {
    CHECK(ring.size() == 16);
    seen.insert(ring.begin(), ring.end());
  }
  CHECK(seen.size() == 5 * 16);
  CHECK(p.collar_triangles.size() == 2 * 16 * 4);
}

TEST_CASE("piece parameter validation") {
  CHECK_THROWS_AS(build_fundamental_piece(1, 16, 4), Error);
  CHECK_THROWS_AS(build_fundamental_piece(4, 15, 4), Error);
  CHECK_THROWS_AS(build_fundamental_piece(4, 6, 4), Error);
  CHECK_THROWS_AS(build_fundamental_piece(4, 16, 0), Error);
}

TEST_CASE("piece structure is recovered from its mesh") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 3);
  const FundamentalPiece q = piece_from_mesh(parse_imesh_text(to_imesh_text(p.mesh)), 3);
  REQUIRE(q.collar_rings.size() == p.collar_rings.size());
  for (std::size_t r = 0; r < p.collar_rings.size(); ++r)
    CHECK(std::set<int>(q.collar_rings[r].begin(), q.collar_rings[r].end()) ==
          std::set<int>(p.collar_rings[r].begin(), p.collar_rings[r].end()));
  CHECK(q.b_loops == p.b_loops);
  CHECK(q.degree == 4);
  std::vector<int> a = p.collar_triangles, b = q.collar_triangles;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("chain of pants along a 4-cycle is a torus with four holes") {
  const FundamentalPiece p = build_fundamental_piece(2, 8, 2);
  const GluedSurface s = glue_surface(p, cycle(4));
  const Topology t = euler_genus(s.mesh);
  CHECK(t.boundary_components == 4);
  CHECK(t.genus == 1);
  CHECK(genus_formula(0, 2, 4) == 1);
}

TEST_CASE("genus of glued surfaces agrees with the closed form") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 2);
  for (int n : {5, 6, 8, 10}) {
    const RegularGraph g = sample_expander(n, 4, 1e-6, derive_seed(1, "graph", n));
    const GluedSurface s = glue_surface(p, g);
    const Topology t = euler_genus(s.mesh);
    CHECK(t.boundary_components == n);
    CHECK(t.genus == genus_formula(0, 4, n));
    CHECK(t.genus == 1 + n);
    double total = 0.0;
    for (const auto& label : s.sigma_loops) total += s.mesh.loop_length(s.mesh.loop(label));
    CHECK(total == doctest::Approx(double(n)).epsilon(1e-12));
  }
  const FundamentalPiece p3 = build_fundamental_piece(3, 8, 2);
  const RegularGraph g3 = sample_expander(6, 3, 1e-6, 2);
  CHECK(euler_genus(glue_surface(p3, g3).mesh).genus == genus_formula(0, 3, 6));
}

TEST_CASE("seam offset does not change topology") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 2);
  const RegularGraph g = sample_expander(6, 4, 1e-6, 4);
  CHECK(euler_genus(glue_surface(p, g, 3).mesh).genus == 7);
}

TEST_CASE("multigraph gluing by explicit pairings") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 2);
  // Doubled 4-cycle: slots 0,1 go forward, slots 2,3 go backward.
  std::vector<LoopPairing> pairs;
  for (int v = 0; v < 4; ++v) {
    const int w = (v + 1) % 4;
    pairs.push_back({v, 0, w, 2});
    pairs.push_back({v, 1, w, 3});
  }
  const GluedSurface s = glue_along_pairings(p, 4, pairs);
  CHECK(euler_genus(s.mesh).genus == 5);
  pairs.pop_back();
  CHECK_THROWS_AS(glue_along_pairings(p, 4, pairs), Error);
}

TEST_CASE("gluing errors") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 2);
  try {
    glue_surface(p, cycle(5));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeMismatch);
  }
  std::vector<GraphEdge> e;
  for (int base : {0, 5})
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) e.emplace_back(base + i, base + j);
  try {
    glue_surface(p, build_regular_graph(10, 4, e));
    FAIL("expected a throw");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotConnected);
  }
}

TEST_CASE("genus formula arithmetic") {
  CHECK(genus_formula(0, 4, 8) == 9);
  CHECK(genus_formula(1, 4, 3) == 1 + 2 * 3);
  try {
    genus_formula(0, 3, 5);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonIntegerResult);
  }
}

TEST_CASE("doubled piece is a genus-zero surface with 2k loops") {
  const FundamentalPiece p = build_fundamental_piece(4, 8, 2);
  const Topology t = euler_genus(doubled_piece(p));
  CHECK(t.boundary_components == 8);
  CHECK(t.genus == 0);
}
