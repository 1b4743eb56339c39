#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

using Triangle = std::array<int, 3>;

struct EdgeKey {
  int a = 0;  // a < b
  int b = 0;

  EdgeKey() = default;
  EdgeKey(int u, int v) : a(u < v ? u : v), b(u < v ? v : u) {}
  auto operator<=>(const EdgeKey&) const = default;
};

struct BoundaryLoop {
  std::string label;
  // Vertices in the orientation induced by the adjacent triangles.
  std::vector<int> vertices;

  bool operator==(const BoundaryLoop&) const = default;
};

// Oriented triangle mesh carrying only an intrinsic metric (edge lengths).
struct IntrinsicMesh {
  int n_vertices = 0;
  std::vector<Triangle> triangles;
  std::map<EdgeKey, double> edge_lengths;
  std::vector<BoundaryLoop> boundary_loops;

  double length(int u, int v) const;
  const BoundaryLoop& loop(std::string_view label) const;
  int loop_index(std::string_view label) const;  // -1 when absent
  double loop_length(const BoundaryLoop& loop) const;
  // Vertices on any boundary loop, ascending.
  std::vector<int> boundary_vertices() const;

  bool operator==(const IntrinsicMesh&) const = default;
};

enum class DiagnosticKind {
  VertexIndexOutOfRange,
  DegenerateConnectivity,
  NonManifoldEdge,
  InconsistentOrientation,
  MissingEdgeLength,
  NonPositiveLength,
  TriangleInequality,
  BoundaryLoopInvalid,
  BoundaryNotPartitioned,
};

const char* to_string(DiagnosticKind kind);

struct MeshDiagnostic {
  DiagnosticKind kind;
  std::string location;
};

// Every violated mesh invariant, with a location string; empty when valid.
std::vector<MeshDiagnostic> validate_mesh(const IntrinsicMesh& m);

// Throws MeshInvariantViolated (or OrientationConflict) listing the first problems.
void require_valid_mesh(const IntrinsicMesh& m);

// Directed boundary cycles induced by the triangles' orientation. Each cycle
// starts at its smallest vertex; cycles are ordered by that vertex.
std::vector<std::vector<int>> extract_boundary_cycles(int n_vertices,
                                                      std::span<const Triangle> triangles);

struct Topology {
  int chi = 0;
  int boundary_components = 0;
  int genus = 0;
};

Topology euler_genus(const IntrinsicMesh& m);

struct Submesh {
  IntrinsicMesh mesh;
  std::vector<int> to_parent;  // submesh vertex -> parent vertex
};

// Mesh spanned by the given triangles. Boundary cycles that coincide with a
// parent loop keep its label; new ones are labeled "cut0", "cut1", ...
Submesh extract_submesh(const IntrinsicMesh& m, std::span<const int> triangle_ids);

std::string to_imesh_text(const IntrinsicMesh& m);
IntrinsicMesh parse_imesh_text(std::string_view text);
IntrinsicMesh read_imesh(const std::filesystem::path& path);

}  // namespace steklov
