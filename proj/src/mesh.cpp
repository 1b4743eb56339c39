#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "steklov/error.hpp"
#include "steklov/io.hpp"

namespace steklov {

double IntrinsicMesh::length(int u, int v) const {
  auto it = edge_lengths.find(EdgeKey(u, v));
  if (it == edge_lengths.end())
    throw Error(ErrorKind::MeshInvariantViolated,
                "no length for edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  return it->second;
}

int IntrinsicMesh::loop_index(std::string_view label) const {
  for (std::size_t i = 0; i < boundary_loops.size(); ++i)
    if (boundary_loops[i].label == label) return static_cast<int>(i);
  return -1;
}

const BoundaryLoop& IntrinsicMesh::loop(std::string_view label) const {
  int i = loop_index(label);
  if (i < 0) throw Error(ErrorKind::UnknownLoop, "no boundary loop '" + std::string(label) + "'");
  return boundary_loops[i];
}

double IntrinsicMesh::loop_length(const BoundaryLoop& bl) const {
  double total = 0.0;
  const std::size_t m = bl.vertices.size();
  for (std::size_t i = 0; i < m; ++i) total += length(bl.vertices[i], bl.vertices[(i + 1) % m]);
  return total;
}

std::vector<int> IntrinsicMesh::boundary_vertices() const {
  std::vector<int> out;
  for (const auto& bl : boundary_loops) out.insert(out.end(), bl.vertices.begin(), bl.vertices.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::VertexIndexOutOfRange: return "VertexIndexOutOfRange";
    case DiagnosticKind::DegenerateConnectivity: return "DegenerateConnectivity";
    case DiagnosticKind::NonManifoldEdge: return "NonManifoldEdge";
    case DiagnosticKind::InconsistentOrientation: return "InconsistentOrientation";
    case DiagnosticKind::MissingEdgeLength: return "MissingEdgeLength";
    case DiagnosticKind::NonPositiveLength: return "NonPositiveLength";
    case DiagnosticKind::TriangleInequality: return "TriangleInequality";
    case DiagnosticKind::BoundaryLoopInvalid: return "BoundaryLoopInvalid";
    case DiagnosticKind::BoundaryNotPartitioned: return "BoundaryNotPartitioned";
  }
  return "Unknown";
}

namespace {

std::string edge_name(int u, int v) {
  return "edge (" + std::to_string(u) + "," + std::to_string(v) + ")";
}

struct EdgeUse {
  int count = 0;
  int forward = 0;  // uses as a -> b
};

std::map<EdgeKey, EdgeUse> count_edge_uses(std::span<const Triangle> triangles) {
  std::map<EdgeKey, EdgeUse> uses;
  for (const auto& t : triangles) {
    for (int c = 0; c < 3; ++c) {
      int u = t[c], v = t[(c + 1) % 3];
      auto& e = uses[EdgeKey(u, v)];
      ++e.count;
      if (u < v) ++e.forward;
    }
  }
  return uses;
}

}  // namespace

std::vector<MeshDiagnostic> validate_mesh(const IntrinsicMesh& m) {
  std::vector<MeshDiagnostic> out;
  auto report = [&](DiagnosticKind k, std::string where) { out.push_back({k, std::move(where)}); };

  bool indices_ok = true;
  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const auto& t = m.triangles[f];
    for (int v : t) {
      if (v < 0 || v >= m.n_vertices) {
        report(DiagnosticKind::VertexIndexOutOfRange, "triangle " + std::to_string(f));
        indices_ok = false;
        break;
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      report(DiagnosticKind::DegenerateConnectivity, "triangle " + std::to_string(f));
      indices_ok = false;
    }
  }
  if (!indices_ok) return out;

  const auto uses = count_edge_uses(m.triangles);
  for (const auto& [key, use] : uses) {
    if (use.count > 2) report(DiagnosticKind::NonManifoldEdge, edge_name(key.a, key.b));
    else if (use.count == 2 && use.forward != 1)
      report(DiagnosticKind::InconsistentOrientation, edge_name(key.a, key.b));
    auto it = m.edge_lengths.find(key);
    if (it == m.edge_lengths.end()) report(DiagnosticKind::MissingEdgeLength, edge_name(key.a, key.b));
    else if (!(it->second > 0.0) || !std::isfinite(it->second))
      report(DiagnosticKind::NonPositiveLength, edge_name(key.a, key.b));
  }

  for (std::size_t f = 0; f < m.triangles.size(); ++f) {
    const auto& t = m.triangles[f];
    double l[3];
    bool have = true;
    for (int c = 0; c < 3; ++c) {
      auto it = m.edge_lengths.find(EdgeKey(t[c], t[(c + 1) % 3]));
      if (it == m.edge_lengths.end()) {
        have = false;
        break;
      }
      l[c] = it->second;
    }
    if (!have) continue;
    if (!(l[0] < l[1] + l[2] && l[1] < l[0] + l[2] && l[2] < l[0] + l[1]))
      report(DiagnosticKind::TriangleInequality, "triangle " + std::to_string(f));
  }

  // Directed boundary edges as induced by their single triangle.
  std::set<std::pair<int, int>> boundary_directed;
  for (const auto& t : m.triangles)
    for (int c = 0; c < 3; ++c) {
      int u = t[c], v = t[(c + 1) % 3];
      if (uses.at(EdgeKey(u, v)).count == 1) boundary_directed.emplace(u, v);
    }

  std::set<std::pair<int, int>> covered;
  std::set<std::string> labels;
  for (const auto& bl : m.boundary_loops) {
    const std::string where = "loop '" + bl.label + "'";
    if (!labels.insert(bl.label).second) report(DiagnosticKind::BoundaryLoopInvalid, where + " duplicated label");
    const std::size_t len = bl.vertices.size();
    if (len < 3) {
      report(DiagnosticKind::BoundaryLoopInvalid, where + " has fewer than 3 vertices");
      continue;
    }
    std::set<int> distinct(bl.vertices.begin(), bl.vertices.end());
    if (distinct.size() != len) report(DiagnosticKind::BoundaryLoopInvalid, where + " repeats a vertex");
    for (std::size_t i = 0; i < len; ++i) {
      int u = bl.vertices[i], v = bl.vertices[(i + 1) % len];
      if (!boundary_directed.count({u, v})) {
        report(DiagnosticKind::BoundaryLoopInvalid, where + " step " + edge_name(u, v) +
                                                       " is not an induced boundary edge");
        continue;
      }
      if (!covered.insert({u, v}).second)
        report(DiagnosticKind::BoundaryNotPartitioned, where + " reuses " + edge_name(u, v));
    }
  }
  for (const auto& e : boundary_directed)
    if (!covered.count(e))
      report(DiagnosticKind::BoundaryNotPartitioned, edge_name(e.first, e.second) + " in no loop");
  return out;
}

void require_valid_mesh(const IntrinsicMesh& m) {
  auto diags = validate_mesh(m);
  if (diags.empty()) return;
  bool orientation = std::any_of(diags.begin(), diags.end(), [](const MeshDiagnostic& d) {
    return d.kind == DiagnosticKind::InconsistentOrientation;
  });
  std::string msg = std::to_string(diags.size()) + " violation(s):";
  for (std::size_t i = 0; i < diags.size() && i < 5; ++i)
    msg += std::string(" ") + to_string(diags[i].kind) + " at " + diags[i].location + ";";
  throw Error(orientation ? ErrorKind::OrientationConflict : ErrorKind::MeshInvariantViolated, msg);
}

std::vector<std::vector<int>> extract_boundary_cycles(int n_vertices,
                                                      std::span<const Triangle> triangles) {
  const auto uses = count_edge_uses(triangles);
  std::vector<int> next(n_vertices, -1);
  for (const auto& t : triangles)
    for (int c = 0; c < 3; ++c) {
      int u = t[c], v = t[(c + 1) % 3];
      if (uses.at(EdgeKey(u, v)).count != 1) continue;
      if (next[u] != -1)
        throw Error(ErrorKind::MeshInvariantViolated,
                    "vertex " + std::to_string(u) + " starts two boundary edges (pinched boundary)");
      next[u] = v;
    }

  std::vector<std::vector<int>> cycles;
  std::vector<char> visited(n_vertices, 0);
  for (int start = 0; start < n_vertices; ++start) {
    if (next[start] == -1 || visited[start]) continue;
    std::vector<int> cycle;
    int v = start;
    while (!visited[v]) {
      visited[v] = 1;
      cycle.push_back(v);
      v = next[v];
      if (v == -1) throw Error(ErrorKind::MeshInvariantViolated, "open boundary chain");
    }
    if (v != start) throw Error(ErrorKind::MeshInvariantViolated, "boundary chain does not close");
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

Topology euler_genus(const IntrinsicMesh& m) {
  std::set<EdgeKey> edges;
  for (const auto& t : m.triangles)
    for (int c = 0; c < 3; ++c) edges.insert(EdgeKey(t[c], t[(c + 1) % 3]));
  Topology top;
  top.chi = m.n_vertices - static_cast<int>(edges.size()) + static_cast<int>(m.triangles.size());
  top.boundary_components = static_cast<int>(m.boundary_loops.size());
  const int twice_genus = 2 - top.chi - top.boundary_components;
  if (twice_genus < 0 || twice_genus % 2 != 0)
    throw Error(ErrorKind::NonIntegerGenus,
                "chi = " + std::to_string(top.chi) + ", b = " + std::to_string(top.boundary_components));
  top.genus = twice_genus / 2;
  return top;
}

Submesh extract_submesh(const IntrinsicMesh& m, std::span<const int> triangle_ids) {
  std::vector<int> local(m.n_vertices, -1);
  std::vector<char> used(m.n_vertices, 0);
  for (int f : triangle_ids)
    for (int v : m.triangles.at(f)) used[v] = 1;

  Submesh sub;
  for (int v = 0; v < m.n_vertices; ++v)
    if (used[v]) {
      local[v] = static_cast<int>(sub.to_parent.size());
      sub.to_parent.push_back(v);
    }
  sub.mesh.n_vertices = static_cast<int>(sub.to_parent.size());
  for (int f : triangle_ids) {
    const auto& t = m.triangles[f];
    Triangle lt{local[t[0]], local[t[1]], local[t[2]]};
    sub.mesh.triangles.push_back(lt);
    for (int c = 0; c < 3; ++c)
      sub.mesh.edge_lengths[EdgeKey(lt[c], lt[(c + 1) % 3])] = m.length(t[c], t[(c + 1) % 3]);
  }

  int cut = 0;
  for (auto& cycle : extract_boundary_cycles(sub.mesh.n_vertices, sub.mesh.triangles)) {
    std::vector<int> parent_ids;
    for (int v : cycle) parent_ids.push_back(sub.to_parent[v]);
    std::sort(parent_ids.begin(), parent_ids.end());
    std::string label;
    for (const auto& bl : m.boundary_loops) {
      std::vector<int> ids = bl.vertices;
      std::sort(ids.begin(), ids.end());
      if (ids == parent_ids) {
        label = bl.label;
        break;
      }
    }
    if (label.empty()) label = "cut" + std::to_string(cut++);
    sub.mesh.boundary_loops.push_back({label, std::move(cycle)});
  }
  return sub;
}

std::string to_imesh_text(const IntrinsicMesh& m) {
  std::set<EdgeKey> edges;
  for (const auto& t : m.triangles)
    for (int c = 0; c < 3; ++c) edges.insert(EdgeKey(t[c], t[(c + 1) % 3]));

  std::ostringstream out;
  out << "IMESH " << m.n_vertices << ' ' << m.triangles.size() << ' ' << m.boundary_loops.size()
      << '\n';
  for (const auto& t : m.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : edges) out << e.a << ' ' << e.b << ' ' << format_double(m.length(e.a, e.b)) << '\n';
  for (const auto& bl : m.boundary_loops) {
    out << bl.label << ' ' << bl.vertices.size();
    for (int v : bl.vertices) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

IntrinsicMesh parse_imesh_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  long long nv = 0, nt = 0, nbl = 0;
  if (!(in >> magic) || magic != "IMESH" || !(in >> nv >> nt >> nbl) || nv < 0 || nt < 0 || nbl < 0)
    throw Error(ErrorKind::ParseError, "expected header 'IMESH nV nT nBL'");

  IntrinsicMesh m;
  m.n_vertices = static_cast<int>(nv);
  m.triangles.resize(static_cast<std::size_t>(nt));
  std::set<EdgeKey> edges;
  for (auto& t : m.triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw Error(ErrorKind::ParseError, "truncated triangle list");
    for (int c = 0; c < 3; ++c) edges.insert(EdgeKey(t[c], t[(c + 1) % 3]));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int u, v;
    std::string len_text;
    if (!(in >> u >> v >> len_text)) throw Error(ErrorKind::ParseError, "truncated edge list");
    char* end = nullptr;
    const double len = std::strtod(len_text.c_str(), &end);
    if (end == len_text.c_str() || *end != '\0')
      throw Error(ErrorKind::ParseError, "bad edge length '" + len_text + "'");
    if (!edges.count(EdgeKey(u, v)))
      throw Error(ErrorKind::ParseError, "length given for " + edge_name(u, v) + " not in any triangle");
    if (!m.edge_lengths.emplace(EdgeKey(u, v), len).second)
      throw Error(ErrorKind::ParseError, "duplicate length for " + edge_name(u, v));
  }
  for (long long i = 0; i < nbl; ++i) {
    BoundaryLoop bl;
    long long count = 0;
    if (!(in >> bl.label >> count) || count < 0) throw Error(ErrorKind::ParseError, "truncated loop list");
    bl.vertices.resize(static_cast<std::size_t>(count));
    for (auto& v : bl.vertices)
      if (!(in >> v)) throw Error(ErrorKind::ParseError, "truncated loop '" + bl.label + "'");
    m.boundary_loops.push_back(std::move(bl));
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorKind::ParseError, "trailing content '" + extra + "'");
  return m;
}

IntrinsicMesh read_imesh(const std::filesystem::path& path) {
  return parse_imesh_text(read_text_file(path));
}

}  // namespace steklov
