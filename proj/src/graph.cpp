#include "steklov/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "steklov/error.hpp"
#include "steklov/io.hpp"
#include "steklov/random.hpp"

namespace steklov {

int RegularGraph::neighbor_slot(int v, int w) const {
  auto nb = neighbors(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), w);
  if (it == nb.end() || *it != w) return -1;
  return static_cast<int>(it - nb.begin());
}

RegularGraph build_regular_graph(int n, int k, std::span<const GraphEdge> edges) {
  if (n <= 0 || k <= 0) throw Error(ErrorKind::InvalidParams, "n and k must be positive");
  if ((static_cast<long long>(n) * k) % 2 != 0)
    throw Error(ErrorKind::OddTotalDegree, "n*k = " + std::to_string(n * k) + " is odd");

  std::vector<GraphEdge> normalized;
  normalized.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw Error(ErrorKind::InvalidParams,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorKind::SelfLoop, "self-loop at vertex " + std::to_string(u));
    normalized.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(normalized.begin(), normalized.end());
  auto dup = std::adjacent_find(normalized.begin(), normalized.end());
  if (dup != normalized.end())
    throw Error(ErrorKind::DuplicateEdge, "edge (" + std::to_string(dup->first) + "," +
                                              std::to_string(dup->second) + ") repeated");

  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : normalized) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(adj[v].size()) != k)
      throw Error(ErrorKind::DegreeMismatch, "vertex " + std::to_string(v) + " has degree " +
                                                 std::to_string(adj[v].size()) + ", expected " +
                                                 std::to_string(k));
  }

  RegularGraph g;
  g.n_ = n;
  g.k_ = k;
  g.edges_ = std::move(normalized);
  g.adjacency_.reserve(static_cast<std::size_t>(n) * k);
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    g.adjacency_.insert(g.adjacency_.end(), nb.begin(), nb.end());
  }
  return g;
}

bool is_connected(const RegularGraph& g) {
  const int n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

double quadratic_form(const RegularGraph& g, const Eigen::VectorXd& x) {
  if (x.size() != g.num_vertices())
    throw Error(ErrorKind::DimensionMismatch, "vector has " + std::to_string(x.size()) +
                                                  " entries, graph has " +
                                                  std::to_string(g.num_vertices()));
  double q = 0.0;
  for (auto [u, v] : g.edges()) {
    const double d = x[u] - x[v];
    q += d * d;
  }
  return q;
}

Eigen::MatrixXd laplacian_matrix(const RegularGraph& g) {
  const int n = g.num_vertices();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) L(v, v) = g.degree();
  for (auto [u, v] : g.edges()) {
    L(u, v) -= 1.0;
    L(v, u) -= 1.0;
  }
  return L;
}

GraphSpectrum laplacian_spectrum(const RegularGraph& g) {
  const int n = g.num_vertices();
  if (n > kMaxDenseGraphVertices)
    throw Error(ErrorKind::InvalidParams,
                "dense spectrum limited to " + std::to_string(kMaxDenseGraphVertices) + " vertices");
  if (n < 2 || !is_connected(g))
    throw Error(ErrorKind::NotConnected, "graph Laplacian spectrum requires a connected graph");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_matrix(g));
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "dense graph eigensolve failed");

  GraphSpectrum spec;
  spec.eigenvalues = solver.eigenvalues();
  spec.lambda1 = spec.eigenvalues[1];

  Eigen::VectorXd x = solver.eigenvectors().col(1);
  x.array() -= x.mean();
  x.normalize();
  const double cutoff = 1e-12 * x.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    if (std::abs(x[i]) > cutoff) {
      if (x[i] < 0) x = -x;
      break;
    }
  }
  spec.fiedler_vector = std::move(x);
  return spec;
}

namespace {

// One pairing-model draw: shuffle the n*k stubs and pair them consecutively.
// Returns false when the result has a loop or repeated edge.
bool draw_pairing(int n, int k, Rng& rng, std::vector<GraphEdge>& edges) {
  std::vector<int> stubs(static_cast<std::size_t>(n) * k);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<int>(i) / k;
  for (std::size_t i = stubs.size() - 1; i > 0; --i) {
    std::size_t j = rng.below(i + 1);
    std::swap(stubs[i], stubs[j]);
  }
  edges.clear();
  std::set<GraphEdge> seen;
  for (std::size_t i = 0; i < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u == v) return false;
    GraphEdge e{std::min(u, v), std::max(u, v)};
    if (!seen.insert(e).second) return false;
    edges.push_back(e);
  }
  return true;
}

}  // namespace

RegularGraph sample_expander(int n, int k, double gap, std::uint64_t seed,
                             const ExpanderOptions& opts) {
  if (n <= 0 || k <= 0 || k >= n)
    throw Error(ErrorKind::InvalidParams, "need 0 < k < n (n=" + std::to_string(n) +
                                              ", k=" + std::to_string(k) + ")");
  if ((static_cast<long long>(n) * k) % 2 != 0)
    throw Error(ErrorKind::InvalidParams, "n*k must be even (n=" + std::to_string(n) +
                                              ", k=" + std::to_string(k) + ")");
  if (!(gap > 0.0)) throw Error(ErrorKind::InvalidParams, "gap threshold must be positive");
  if (opts.max_attempts <= 0) throw Error(ErrorKind::InvalidParams, "max_attempts must be positive");

  Rng rng(seed);
  std::vector<GraphEdge> edges;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    if (!draw_pairing(n, k, rng, edges)) continue;
    RegularGraph g = build_regular_graph(n, k, edges);
    if (!is_connected(g)) continue;
    if (laplacian_spectrum(g).lambda1 < gap) continue;
    return g;
  }
  throw Error(ErrorKind::SamplingExhausted,
              "no simple connected " + std::to_string(k) + "-regular graph on " +
                  std::to_string(n) + " vertices with lambda1 >= " + format_double(gap) +
                  " after " + std::to_string(opts.max_attempts) + " attempts");
}

std::vector<RegularGraph> generate_expander_family(std::span<const int> sizes, int k, double gap,
                                                   std::uint64_t seed,
                                                   const ExpanderOptions& opts) {
  std::vector<RegularGraph> family;
  family.reserve(sizes.size());
  for (int n : sizes)
    family.push_back(sample_expander(n, k, gap, derive_seed(seed, "graph", n), opts));
  return family;
}

std::string to_text(const RegularGraph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.degree() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

RegularGraph parse_graph_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<long long> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size())
      throw Error(ErrorKind::ParseError, "unexpected token '" + token + "' in graph");
    values.push_back(value);
  }
  if (values.size() < 2 || values.size() % 2 != 0)
    throw Error(ErrorKind::ParseError, "graph text must be 'n k' followed by vertex pairs");
  std::vector<GraphEdge> edges;
  for (std::size_t i = 2; i < values.size(); i += 2)
    edges.emplace_back(static_cast<int>(values[i]), static_cast<int>(values[i + 1]));
  return build_regular_graph(static_cast<int>(values[0]), static_cast<int>(values[1]), edges);
}

RegularGraph read_graph(const std::filesystem::path& path) {
  return parse_graph_text(read_text_file(path));
}

}  // namespace steklov
