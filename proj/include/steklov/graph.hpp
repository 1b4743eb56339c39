#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace steklov {

using GraphEdge = std::pair<int, int>;

// Finite simple k-regular graph. Immutable once built; construct through
// build_regular_graph, which enforces regularity and simplicity.
class RegularGraph {
 public:
  int num_vertices() const noexcept { return n_; }
  int degree() const noexcept { return k_; }
  // Unordered edges as (u, v) with u < v, sorted ascending.
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  // Sorted neighbor list of vertex v.
  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + static_cast<std::size_t>(v) * k_, static_cast<std::size_t>(k_)};
  }
  // Position of w in the sorted neighbor list of v, or -1.
  int neighbor_slot(int v, int w) const;

  bool operator==(const RegularGraph&) const = default;

 private:
  friend RegularGraph build_regular_graph(int n, int k, std::span<const GraphEdge> edges);

  int n_ = 0;
  int k_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<int> adjacency_;
};

RegularGraph build_regular_graph(int n, int k, std::span<const GraphEdge> edges);

bool is_connected(const RegularGraph& g);

// q(x) = sum over unoriented edges of (x(v) - x(w))^2.
double quadratic_form(const RegularGraph& g, const Eigen::VectorXd& x);

// Dense combinatorial Laplacian kI - A.
Eigen::MatrixXd laplacian_matrix(const RegularGraph& g);

struct GraphSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  double lambda1 = 0.0;
  Eigen::VectorXd fiedler_vector;  // unit norm, sum zero, first nonzero entry positive
};

// Largest graph accepted by the dense eigensolver.
inline constexpr int kMaxDenseGraphVertices = 4096;

GraphSpectrum laplacian_spectrum(const RegularGraph& g);

struct ExpanderOptions {
  int max_attempts = 1000;
};

// Pairing-model sample of a simple connected k-regular graph on n vertices
// with lambda1 >= gap. Deterministic in seed.
RegularGraph sample_expander(int n, int k, double gap, std::uint64_t seed,
                             const ExpanderOptions& opts = {});

// One graph per requested size; each size draws from derive_seed(seed, "graph", n).
std::vector<RegularGraph> generate_expander_family(std::span<const int> sizes, int k, double gap,
                                                   std::uint64_t seed,
                                                   const ExpanderOptions& opts = {});

std::string to_text(const RegularGraph& g);
RegularGraph parse_graph_text(std::string_view text);
RegularGraph read_graph(const std::filesystem::path& path);

}  // namespace steklov
