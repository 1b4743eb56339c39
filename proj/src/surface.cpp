#include "steklov/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "steklov/error.hpp"

namespace steklov {

namespace {

constexpr double kSeamLengthTol = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Regular m-gon (or circle) filled with p concentric rings; ring j has m*j
// vertices, so each of the m slices is a uniform triangular grid.
struct PlanarPatch {
  std::vector<Point> positions;
  std::vector<Triangle> triangles;
  int m = 0;
  int p = 0;

  int id(int ring, int i) const {
    if (ring == 0) return 0;
    const int count = m * ring;
    i = ((i % count) + count) % count;
    return 1 + m * (ring - 1) * ring / 2 + i;
  }
  // Outer ring vertex at position i (0 <= i < m*p), counterclockwise.
  int outer(int i) const { return id(p, i); }
};

PlanarPatch polygon_patch(int m, int p, double circumradius, bool round) {
  PlanarPatch patch;
  patch.m = m;
  patch.p = p;
  patch.positions.resize(static_cast<std::size_t>(1 + m * p * (p + 1) / 2));
  auto corner = [&](int c) {
    const double a = 2.0 * std::numbers::pi * c / m;
    return Point{circumradius * std::cos(a), circumradius * std::sin(a)};
  };
  patch.positions[0] = {0.0, 0.0};
  for (int j = 1; j <= p; ++j) {
    const double scale = static_cast<double>(j) / p;
    for (int i = 0; i < m * j; ++i) {
      Point q;
      if (round) {
        const double a = 2.0 * std::numbers::pi * i / (m * j);
        q = {circumradius * scale * std::cos(a), circumradius * scale * std::sin(a)};
      } else {
        const int c = i / j;
        const double t = static_cast<double>(i % j) / j;
        const Point c0 = corner(c), c1 = corner(c + 1);
        q = {scale * ((1.0 - t) * c0.x + t * c1.x), scale * ((1.0 - t) * c0.y + t * c1.y)};
      }
      patch.positions[patch.id(j, i)] = q;
    }
  }
  for (int j = 0; j < p; ++j) {
    for (int c = 0; c < m; ++c) {
      auto a = [&](int t) { return patch.id(j, c * j + t); };
      auto b = [&](int t) { return patch.id(j + 1, c * (j + 1) + t); };
      for (int t = 0; t <= j; ++t) patch.triangles.push_back({a(t), b(t), b(t + 1)});
      for (int t = 0; t < j; ++t) patch.triangles.push_back({a(t), b(t + 1), a(t + 1)});
    }
  }
  return patch;
}

IntrinsicMesh mesh_from_patch(const PlanarPatch& patch, bool reversed) {
  IntrinsicMesh mesh;
  mesh.n_vertices = static_cast<int>(patch.positions.size());
  mesh.triangles.reserve(patch.triangles.size());
  for (const auto& t : patch.triangles) {
    mesh.triangles.push_back(reversed ? Triangle{t[0], t[2], t[1]} : t);
    for (int c = 0; c < 3; ++c) {
      const int u = t[c], v = t[(c + 1) % 3];
      mesh.edge_lengths[EdgeKey(u, v)] = distance(patch.positions[u], patch.positions[v]);
    }
  }
  return mesh;
}

// Disjoint union of meshes followed by vertex identifications. Vertex numbers
// after finish() follow the order of first appearance of each class
// representative (the smallest original id in the class).
class MeshAssembler {
 public:
  int append(const IntrinsicMesh& m) {
    const int base = static_cast<int>(parent_.size());
    parent_.resize(parent_.size() + m.n_vertices);
    std::iota(parent_.begin() + base, parent_.end(), base);
    for (const auto& t : m.triangles) triangles_.push_back({t[0] + base, t[1] + base, t[2] + base});
    for (const auto& [key, len] : m.edge_lengths) lengths_.push_back({EdgeKey(key.a + base, key.b + base), len});
    return base;
  }

  void identify(int u, int v) {
    u = find(u);
    v = find(v);
    if (u == v) return;
    if (u < v) parent_[v] = u;
    else parent_[u] = v;
  }

  // Sews two loops, each listed in its induced orientation, so that
  // a[i] meets b[(offset - i) mod n]; this reverses direction across the seam.
  void weld(const std::vector<int>& a, const std::vector<int>& b, int offset) {
    if (a.size() != b.size())
      throw Error(ErrorKind::InvalidParams, "cannot weld loops of different sizes");
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) identify(a[i], b[(((offset - i) % n) + n) % n]);
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Returns the original-id -> compacted-id map.
  std::vector<int> finish(IntrinsicMesh& out) {
    const int total = static_cast<int>(parent_.size());
    std::vector<int> compact(total, -1);
    int next = 0;
    for (int v = 0; v < total; ++v)
      if (find(v) == v) compact[v] = next++;
    for (int v = 0; v < total; ++v) compact[v] = compact[find(v)];

    out = IntrinsicMesh{};
    out.n_vertices = next;
    out.triangles.reserve(triangles_.size());
    for (const auto& t : triangles_) out.triangles.push_back({compact[t[0]], compact[t[1]], compact[t[2]]});
    for (const auto& [key, len] : lengths_) {
      const EdgeKey k(compact[key.a], compact[key.b]);
      auto [it, inserted] = out.edge_lengths.emplace(k, len);
      if (!inserted && std::abs(it->second - len) > kSeamLengthTol * std::max(1.0, len))
        throw Error(ErrorKind::MeshInvariantViolated,
                    "seam edge (" + std::to_string(k.a) + "," + std::to_string(k.b) +
                        ") has mismatched lengths");
    }
    return compact;
  }

 private:
  std::vector<int> parent_;
  std::vector<Triangle> triangles_;
  std::vector<std::pair<EdgeKey, double>> lengths_;
};

std::vector<int> mapped(const std::vector<int>& ids, int base, const std::vector<int>& compact) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int v : ids) out.push_back(compact[v + base]);
  return out;
}

}  // namespace

IntrinsicMesh build_flat_cylinder(int n_b, int n_layers, double circumference, double length) {
  if (n_b < 3 || n_layers < 1 || !(circumference > 0.0) || !(length > 0.0))
    throw Error(ErrorKind::InvalidParams, "flat cylinder needs n_b >= 3, n_layers >= 1, positive sizes");
  IntrinsicMesh mesh;
  mesh.n_vertices = n_b * (n_layers + 1);
  const double w = circumference / n_b;
  const double h = length / n_layers;
  const double d = std::sqrt(w * w + h * h);
  auto id = [n_b](int r, int i) { return r * n_b + ((i % n_b) + n_b) % n_b; };
  for (int r = 0; r < n_layers; ++r) {
    for (int i = 0; i < n_b; ++i) {
      const int v00 = id(r, i), v01 = id(r, i + 1), v11 = id(r + 1, i + 1), v10 = id(r + 1, i);
      mesh.triangles.push_back({v00, v01, v11});
      mesh.triangles.push_back({v00, v11, v10});
      mesh.edge_lengths[EdgeKey(v00, v01)] = w;
      mesh.edge_lengths[EdgeKey(v00, v10)] = h;
      mesh.edge_lengths[EdgeKey(v00, v11)] = d;
    }
  }
  for (int i = 0; i < n_b; ++i) mesh.edge_lengths[EdgeKey(id(n_layers, i), id(n_layers, i + 1))] = w;

  BoundaryLoop bottom{"bottom", {}}, top{"top", {}};
  for (int i = 0; i < n_b; ++i) bottom.vertices.push_back(id(0, i));
  // The top ring is traversed against increasing i by the induced orientation.
  for (int i = 0; i < n_b; ++i) top.vertices.push_back(id(n_layers, -i));
  mesh.boundary_loops = {std::move(bottom), std::move(top)};
  return mesh;
}

IntrinsicMesh build_flat_rectangle(int nx, int ny, double width, double height) {
  if (nx < 1 || ny < 1 || !(width > 0.0) || !(height > 0.0))
    throw Error(ErrorKind::InvalidParams, "rectangle needs positive grid counts and sizes");
  IntrinsicMesh mesh;
  mesh.n_vertices = (nx + 1) * (ny + 1);
  const double w = width / nx, h = height / ny, d = std::sqrt(w * w + h * h);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
      mesh.edge_lengths[EdgeKey(v00, v10)] = w;
      mesh.edge_lengths[EdgeKey(v00, v01)] = h;
      mesh.edge_lengths[EdgeKey(v00, v11)] = d;
    }
  for (int i = 0; i < nx; ++i) mesh.edge_lengths[EdgeKey(id(i, ny), id(i + 1, ny))] = w;
  for (int j = 0; j < ny; ++j) mesh.edge_lengths[EdgeKey(id(nx, j), id(nx, j + 1))] = h;
  for (auto& cycle : extract_boundary_cycles(mesh.n_vertices, mesh.triangles))
    mesh.boundary_loops.push_back({"outer", std::move(cycle)});
  return mesh;
}

IntrinsicMesh build_disk(int rings, double radius) {
  if (rings < 1 || !(radius > 0.0)) throw Error(ErrorKind::InvalidParams, "disk needs rings >= 1, radius > 0");
  PlanarPatch patch = polygon_patch(6, rings, radius, true);
  IntrinsicMesh mesh = mesh_from_patch(patch, false);
  BoundaryLoop outer{"outer", {}};
  for (int i = 0; i < 6 * rings; ++i) outer.vertices.push_back(patch.outer(i));
  mesh.boundary_loops.push_back(std::move(outer));
  return mesh;
}

FundamentalPiece build_fundamental_piece(int k, int n_b, int resolution) {
  if (k < 2 || n_b < 8 || n_b % 2 != 0 || resolution < 1)
    throw Error(ErrorKind::InvalidParams,
                "fundamental piece needs k >= 2, even n_b >= 8, resolution >= 1");
  const int m = 2 * (k + 1);
  const int p = n_b / 2;
  const double side = 0.5;
  const double circumradius = side / (2.0 * std::sin(std::numbers::pi / m));
  const PlanarPatch patch = polygon_patch(m, p, circumradius, false);

  MeshAssembler asm_;
  const int top = asm_.append(mesh_from_patch(patch, false));
  const int bottom = asm_.append(mesh_from_patch(patch, true));
  // Odd sides are sewn, even sides 2q stay free and become loop q.
  for (int c = 1; c < m; c += 2)
    for (int t = 0; t <= p; ++t) asm_.identify(top + patch.outer(c * p + t), bottom + patch.outer(c * p + t));

  const IntrinsicMesh tube = build_flat_cylinder(n_b, resolution, 1.0, 1.0);
  const int hub_triangles = static_cast<int>(2 * patch.triangles.size());
  std::vector<int> tube_base;
  for (int q = 0; q <= k; ++q) {
    const int c = 2 * q;
    std::vector<int> hub_loop;
    for (int t = 0; t <= p; ++t) hub_loop.push_back(top + patch.outer(c * p + t));
    for (int t = p - 1; t >= 1; --t) hub_loop.push_back(bottom + patch.outer(c * p + t));
    const int base = asm_.append(tube);
    tube_base.push_back(base);
    std::vector<int> tube_end;
    for (int v : tube.loop("bottom").vertices) tube_end.push_back(base + v);
    asm_.weld(hub_loop, tube_end, 0);
  }

  FundamentalPiece piece;
  const std::vector<int> compact = asm_.finish(piece.mesh);
  piece.degree = k;
  piece.genus0 = 0;
  piece.n_b = n_b;
  piece.n_layers = resolution;
  for (int q = 0; q <= k; ++q) {
    const std::string label = q == 0 ? "S0" : "B" + std::to_string(q);
    piece.mesh.boundary_loops.push_back({label, mapped(tube.loop("top").vertices, tube_base[q], compact)});
    if (q > 0) piece.b_loops.push_back(label);
  }
  for (int r = 0; r <= resolution; ++r) {
    std::vector<int> ring;
    for (int i = 0; i < n_b; ++i) ring.push_back(compact[tube_base[0] + (resolution - r) * n_b + i]);
    piece.collar_rings.push_back(std::move(ring));
  }
  const int tube_triangles = static_cast<int>(tube.triangles.size());
  for (int f = 0; f < tube_triangles; ++f) piece.collar_triangles.push_back(hub_triangles + f);

  require_valid_mesh(piece.mesh);
  for (const auto& bl : piece.mesh.boundary_loops) {
    if (std::abs(piece.mesh.loop_length(bl) - 1.0) > 1e-9)
      throw Error(ErrorKind::MeshInvariantViolated, "loop " + bl.label + " does not have unit length");
  }
  return piece;
}

FundamentalPiece piece_from_mesh(IntrinsicMesh mesh, int n_layers) {
  if (n_layers < 1) throw Error(ErrorKind::InvalidParams, "collar needs at least one layer");
  require_valid_mesh(mesh);
  FundamentalPiece piece;
  const BoundaryLoop& sigma0 = mesh.loop("S0");
  piece.n_b = static_cast<int>(sigma0.vertices.size());
  piece.degree = static_cast<int>(mesh.boundary_loops.size()) - 1;
  for (int q = 1; q <= piece.degree; ++q) {
    const std::string label = "B" + std::to_string(q);
    if (static_cast<int>(mesh.loop(label).vertices.size()) != piece.n_b)
      throw Error(ErrorKind::MeshInvariantViolated, "loop " + label + " has a different vertex count");
    piece.b_loops.push_back(label);
  }

  std::vector<std::set<int>> neighbors(mesh.n_vertices);
  for (const auto& t : mesh.triangles)
    for (int c = 0; c < 3; ++c) {
      neighbors[t[c]].insert(t[(c + 1) % 3]);
      neighbors[t[(c + 1) % 3]].insert(t[c]);
    }
  std::vector<int> depth(mesh.n_vertices, -1);
  std::vector<int> frontier = sigma0.vertices;
  for (int v : frontier) depth[v] = 0;
  piece.collar_rings.push_back(sigma0.vertices);
  for (int r = 1; r <= n_layers; ++r) {
    std::vector<int> ring;
    for (int v : frontier)
      for (int w : neighbors[v])
        if (depth[w] == -1) {
          depth[w] = r;
          ring.push_back(w);
        }
    std::sort(ring.begin(), ring.end());
    if (static_cast<int>(ring.size()) != piece.n_b)
      throw Error(ErrorKind::MeshInvariantViolated,
                  "collar ring " + std::to_string(r) + " has " + std::to_string(ring.size()) + " vertices");
    piece.collar_rings.push_back(ring);
    frontier = std::move(ring);
  }
  for (int f = 0; f < static_cast<int>(mesh.triangles.size()); ++f) {
    const auto& t = mesh.triangles[f];
    if (depth[t[0]] >= 0 && depth[t[1]] >= 0 && depth[t[2]] >= 0) piece.collar_triangles.push_back(f);
  }
  piece.n_layers = n_layers;
  piece.genus0 = euler_genus(mesh).genus;
  piece.mesh = std::move(mesh);
  return piece;
}

GluedSurface glue_along_pairings(const FundamentalPiece& piece, int n, std::span<const LoopPairing> pairings,
                                 int offset) {
  const int k = static_cast<int>(piece.b_loops.size());
  if (n < 1) throw Error(ErrorKind::InvalidParams, "need at least one piece");
  if (static_cast<long long>(pairings.size()) * 2 != static_cast<long long>(n) * k)
    throw Error(ErrorKind::DegreeMismatch, "pairings must use each of the " + std::to_string(n * k) +
                                               " gluing loops exactly once");
  std::vector<char> used(static_cast<std::size_t>(n) * k, 0);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto claim = [&](int v, int slot) {
    if (v < 0 || v >= n || slot < 0 || slot >= k)
      throw Error(ErrorKind::InvalidParams, "pairing references loop " + std::to_string(slot) + " of piece " +
                                                std::to_string(v));
    char& u = used[static_cast<std::size_t>(v) * k + slot];
    if (u) throw Error(ErrorKind::DegreeMismatch, "loop " + std::to_string(slot) + " of piece " +
                                                      std::to_string(v) + " is paired twice");
    u = 1;
  };
  for (const auto& p : pairings) {
    claim(p.v, p.slot_v);
    claim(p.w, p.slot_w);
    parent[find(p.v)] = find(p.w);
  }
  for (int v = 1; v < n; ++v)
    if (find(v) != find(0)) throw Error(ErrorKind::NotConnected, "gluing pattern must be connected");

  MeshAssembler asm_;
  std::vector<int> base(n);
  for (int v = 0; v < n; ++v) base[v] = asm_.append(piece.mesh);

  auto loop_of = [&](int v, int slot) {
    std::vector<int> ids = piece.mesh.loop(piece.b_loops[slot]).vertices;
    for (int& id : ids) id += base[v];
    return ids;
  };
  for (const auto& p : pairings) asm_.weld(loop_of(p.v, p.slot_v), loop_of(p.w, p.slot_w), offset);

  GluedSurface s;
  const std::vector<int> compact = asm_.finish(s.mesh);
  s.triangles_per_piece = static_cast<int>(piece.mesh.triangles.size());
  s.collar_triangles_local = piece.collar_triangles;
  const auto& sigma0 = piece.mesh.loop(piece.sigma0_loop).vertices;
  for (int v = 0; v < n; ++v) {
    std::vector<int> local(piece.mesh.n_vertices);
    std::iota(local.begin(), local.end(), 0);
    s.piece_vertex_maps.push_back(mapped(local, base[v], compact));
    s.sigma_loops.push_back("S" + std::to_string(v));
    s.mesh.boundary_loops.push_back({s.sigma_loops.back(), mapped(sigma0, base[v], compact)});
    std::vector<std::vector<int>> rings;
    for (const auto& ring : piece.collar_rings) rings.push_back(mapped(ring, base[v], compact));
    s.collar_maps.push_back(std::move(rings));
  }
  require_valid_mesh(s.mesh);
  return s;
}

GluedSurface glue_surface(const FundamentalPiece& piece, const RegularGraph& g, int offset) {
  if (static_cast<int>(piece.b_loops.size()) != g.degree())
    throw Error(ErrorKind::DegreeMismatch, "piece has " + std::to_string(piece.b_loops.size()) +
                                               " gluing loops, graph degree is " +
                                               std::to_string(g.degree()));
  if (!is_connected(g)) throw Error(ErrorKind::NotConnected, "gluing pattern must be connected");

  std::vector<LoopPairing> pairings;
  for (auto [v, w] : g.edges()) pairings.push_back({v, g.neighbor_slot(v, w), w, g.neighbor_slot(w, v)});
  GluedSurface s = glue_along_pairings(piece, g.num_vertices(), pairings, offset);
  s.graph = g;
  return s;
}

IntrinsicMesh doubled_piece(const FundamentalPiece& piece) {
  if (piece.b_loops.empty()) throw Error(ErrorKind::InvalidParams, "piece has no gluing loop");
  MeshAssembler asm_;
  const int first = asm_.append(piece.mesh);
  const int second = asm_.append(piece.mesh);
  std::vector<int> a = piece.mesh.loop(piece.b_loops[0]).vertices;
  std::vector<int> b = a;
  for (int& v : a) v += first;
  for (int& v : b) v += second;
  asm_.weld(a, b, 0);

  IntrinsicMesh out;
  const std::vector<int> compact = asm_.finish(out);
  for (int copy = 0; copy < 2; ++copy)
    for (const auto& bl : piece.mesh.boundary_loops) {
      if (bl.label == piece.b_loops[0]) continue;
      out.boundary_loops.push_back({copy == 0 ? bl.label : bl.label + "'",
                                    mapped(bl.vertices, copy == 0 ? first : second, compact)});
    }
  require_valid_mesh(out);
  return out;
}

long long genus_formula(int genus0, int k, int n) {
  if (genus0 < 0 || k < 1 || n < 1) throw Error(ErrorKind::InvalidParams, "genus formula needs genus0 >= 0, k, n >= 1");
  const long long twice = 2 + (2LL * genus0 + k - 2) * n;
  if (twice % 2 != 0)
    throw Error(ErrorKind::NonIntegerResult, "k*n is odd (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  return twice / 2;
}

}  // namespace steklov
