#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orthograph/geometry.hpp"

namespace orthograph {

inline constexpr const char* kFamilyGamma = "gamma";
inline constexpr const char* kFamilyGammaPrime = "gamma-prime";
inline constexpr const char* kFamilyAlonKrivelevich = "alon-krivelevich";

/// Everything needed to rebuild a graph bit-for-bit.
struct GraphMeta {
  std::string family;
  std::size_t k = 0;
  std::uint32_t p = 0;
  std::uint32_t e = 0;
  std::uint32_t q = 0;
  std::optional<PointClass> epsilon;
  Field::Code xi = 0;
  std::vector<std::uint32_t> modulus;
  /// Successive centers when the graph is an iterated induced neighborhood.
  std::vector<std::size_t> neighborhood_path;

  bool operator==(const GraphMeta&) const = default;
};

std::string describe(const GraphMeta& meta);

/// Finite graph on packed bit rows. Loops are flagged separately and also set
/// on the diagonal, so a row's popcount is the adjacency-matrix row sum.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, GraphMeta meta, std::vector<ProjectivePoint> labels = {});

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }
  std::span<const std::uint64_t> row(std::size_t v) const { return {bits_.data() + v * words_, words_}; }
  std::span<std::uint64_t> mutable_row(std::size_t v) { return {bits_.data() + v * words_, words_}; }

  bool adjacent(std::size_t u, std::size_t v) const {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }
  bool has_loop(std::size_t v) const { return (loops_[v / 64] >> (v % 64)) & 1U; }
  std::size_t loop_count() const;
  /// Row sum of the adjacency matrix (a loop counts once).
  std::size_t degree(std::size_t v) const;
  /// Adjacent vertices other than v itself, ascending.
  std::vector<std::size_t> neighbors(std::size_t v) const;

  void connect(std::size_t u, std::size_t v);
  void set_loop(std::size_t v);

  const std::vector<ProjectivePoint>& labels() const { return labels_; }
  const GraphMeta& meta() const { return meta_; }
  GraphMeta& mutable_meta() { return meta_; }

  /// Vertex carrying the given point index, if any (labels are sorted).
  std::optional<std::size_t> vertex_of_point(std::size_t point_index) const;

  bool operator==(const Graph& other) const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> loops_;
  std::vector<ProjectivePoint> labels_;
  GraphMeta meta_;
};

struct GraphStats {
  std::size_t n = 0;
  std::size_t degree_min = 0;
  std::size_t degree_max = 0;
  /// Edges between distinct vertices.
  std::size_t edge_count = 0;
  std::size_t loop_count = 0;
  bool is_regular = true;
  std::size_t d = 0;
};

struct BuildOptions {
  std::size_t vertex_cap = kDefaultVertexCap;
  unsigned threads = 1;
};

/// Orthogonality graph on the points of class epsilon (Square or Nonsquare).
Graph build_gamma(const QuadraticSpace& space, PointClass epsilon, const BuildOptions& options = {});
/// Orthogonality graph on every point, loops on singular points.
Graph build_gamma_prime(const QuadraticSpace& space, const BuildOptions& options = {});
/// Standard form x.y on the points with x.x != 0.
Graph build_ak(const Field& field, std::size_t k, const BuildOptions& options = {});

Graph induced_subgraph(const Graph& g, std::span<const std::size_t> vertices);
Graph induced_neighborhood(const Graph& g, std::size_t v);

/// Rebuilds a graph from its descriptor.
Graph rebuild(const GraphMeta& meta, const BuildOptions& options = {});

GraphStats graph_stats(const Graph& g);

/// `# family k q epsilon n m` header, then `u v` lines (0-based, u <= v).
void write_edge_list(std::ostream& out, const Graph& g);
/// DIMACS `p edge n m` with 1-based `e u v` lines; loops are omitted.
void write_dimacs(std::ostream& out, const Graph& g);

}  // namespace orthograph
