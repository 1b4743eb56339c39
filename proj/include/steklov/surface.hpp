#pragma once

#include <span>
#include <string>
#include <vector>

#include "steklov/graph.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

// Structured flat cylinder: ring r (0 <= r <= n_layers) holds vertices
// r*n_b .. r*n_b + n_b - 1. Boundary loops "bottom" (ring 0) and "top".
IntrinsicMesh build_flat_cylinder(int n_b, int n_layers, double circumference, double length);

// Flat rectangle [0,width] x [0,height] on an nx-by-ny grid; one loop "outer".
IntrinsicMesh build_flat_rectangle(int nx, int ny, double width, double height);

// Disk of the given radius: `rings` concentric circles, ring j carrying 6j
// equally spaced vertices. Boundary loop "outer" is a regular polygon
// inscribed in the circle.
IntrinsicMesh build_disk(int rings, double radius);

// M0: genus-zero surface with k+1 boundary loops of length 1, "S0" being the
// distinguished loop whose neighbourhood is a flat collar of length 1, and
// "B1".."Bk" the gluing loops.
struct FundamentalPiece {
  IntrinsicMesh mesh;
  std::string sigma0_loop = "S0";
  std::vector<std::string> b_loops;
  // collar_rings[r] lies at distance r / n_layers from S0; ring 0 is S0.
  std::vector<std::vector<int>> collar_rings;
  std::vector<int> collar_triangles;
  int degree = 0;
  int genus0 = 0;
  int n_b = 0;
  int n_layers = 0;
};

// Hub: two copies of a flat regular 2(k+1)-gon with side 1/2, sewn along
// alternate sides, which leaves k+1 free loops of length 1. A flat tube of
// circumference 1 and length 1 (n_layers = resolution) is welded onto every
// free loop. Requires k >= 2, even n_b >= 8, resolution >= 1.
FundamentalPiece build_fundamental_piece(int k, int n_b, int resolution);

// Recovers the piece structure of a mesh read from disk: loops must be
// labeled S0, B1.., and the collar is found as the first n_layers hop-rings
// around S0.
FundamentalPiece piece_from_mesh(IntrinsicMesh mesh, int n_layers);

struct GluedSurface {
  IntrinsicMesh mesh;
  RegularGraph graph;
  int triangles_per_piece = 0;
  // piece_vertex_maps[v][local piece vertex] = global vertex.
  std::vector<std::vector<int>> piece_vertex_maps;
  // Label of the boundary loop Sigma_v ("S<v>").
  std::vector<std::string> sigma_loops;
  // collar_maps[v][r] = global ids of collar ring r of piece v.
  std::vector<std::vector<std::vector<int>>> collar_maps;
  // Collar triangles as local piece triangle ids (same for every piece).
  std::vector<int> collar_triangles_local;

  int collar_layers() const {
    return collar_maps.empty() ? 0 : static_cast<int>(collar_maps.front().size()) - 1;
  }
  // Global triangle ids of piece v are [v*T, (v+1)*T), T = triangles_per_piece.
  int piece_triangle_begin(int v) const { return v * triangles_per_piece; }
};

// Loop B_{slot_v+1} of piece v is welded to loop B_{slot_w+1} of piece w.
struct LoopPairing {
  int v = 0;
  int slot_v = 0;
  int w = 0;
  int slot_w = 0;
};

// Gluing along an arbitrary pairing of the n*k gluing loops, which admits
// multigraph patterns. The result's graph member is left empty.
GluedSurface glue_along_pairings(const FundamentalPiece& piece, int n, std::span<const LoopPairing> pairings,
                                 int offset = 0);

// One copy of the piece per graph vertex. For each graph edge v~w, loop
// B_{i+1} of M_v is welded to B_{j+1} of M_w, with i, j the positions of w
// and v in each other's sorted neighbor lists. Identification reverses loop
// orientation; `offset` rotates it.
GluedSurface glue_surface(const FundamentalPiece& piece, const RegularGraph& g, int offset = 0);

// Two copies of the piece sewn along B1; the union M_v u M_w of neighbouring
// pieces seen in isolation. Loops of the second copy carry a "'" suffix.
IntrinsicMesh doubled_piece(const FundamentalPiece& piece);

// 1 + (genus0 + k/2 - 1) * n.
long long genus_formula(int genus0, int k, int n);

}  // namespace steklov
