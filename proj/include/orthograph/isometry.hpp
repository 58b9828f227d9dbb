#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <stdexcept>
#include <vector>

#include "orthograph/geometry.hpp"
#include "orthograph/graphs.hpp"
#include "orthograph/linalg.hpp"

namespace orthograph {

/// B = diag(xi, 1, ..., 1), so that Q(x) = x^T B x.
FieldMatrix gram_matrix(const QuadraticSpace& space);

/// A^T B A == B.
bool is_isometry(const QuadraticSpace& space, const FieldMatrix& a);

/// B^{-1} A^T B; the inverse of an isometry.
FieldMatrix isometry_inverse(const QuadraticSpace& space, const FieldMatrix& a);

/**
 * Isometry A whose columns c_1..c_k satisfy beta(c_i, c_j) = B_ij and whose
 * base column spans y: column k for square points, column 1 for non-square
 * points. Remaining columns are picked from the perp space of the columns
 * chosen so far (last to first), taking the first point in the perp space's
 * canonical enumeration whose form value can be scaled to B_ii.
 *
 * Throws std::invalid_argument for singular y.
 */
FieldMatrix orthonormal_frame(const QuadraticSpace& space, const ProjectivePoint& y);

/// e_k for square points, e_1 for non-square points.
ProjectivePoint base_point(const QuadraticSpace& space, PointClass c);

struct IsometryWitness {
  FieldMatrix matrix;
  ProjectivePoint source;
  ProjectivePoint target;
};

/// An isometry mapping <x> to <y>. x and y must share a non-singular class.
IsometryWitness transitivity_witness(const QuadraticSpace& space, const ProjectivePoint& x, const ProjectivePoint& y);

/// perm[v] = vertex carrying A * label(v). Throws std::invalid_argument if an
/// image falls outside the vertex set.
std::vector<std::size_t> apply_isometry(const IsometryWitness& w, const QuadraticSpace& space, const Graph& g);

/// Adjacent ordered pairs (u, v) whose images are not adjacent. For a
/// permutation, zero means adjacency is preserved in both directions since
/// the edge count is finite and fixed.
std::size_t adjacency_mismatches(const Graph& g, const std::vector<std::size_t>& perm);
bool is_permutation(const std::vector<std::size_t>& perm, std::size_t n);

struct NeighborhoodMap {
  std::size_t center = 0;
  /// N(center) ascending.
  std::vector<std::size_t> neighbors;
  /// image[i] = vertex of the (k-1)-dimensional graph matched to neighbors[i].
  std::vector<std::size_t> image;
};

/// Sends N(v) into `lower` = Gamma(k-1, q) of the same field and xi: map v
/// to e_k by an isometry, then drop the last coordinate (x^perp = {y_k = 0}).
NeighborhoodMap neighborhood_isomorphism(const QuadraticSpace& space, const Graph& g, std::size_t v,
                                         const Graph& lower);

struct NeighborhoodCheck {
  bool bijective = false;
  std::size_t mismatched_bits = 0;
  bool exact() const { return bijective && mismatched_bits == 0; }
};

/// Compares the relabeled neighborhood against `lower` bit by bit.
NeighborhoodCheck check_neighborhood_map(const Graph& g, const NeighborhoodMap& map, const Graph& lower);

struct TransitivityOptions {
  /// Every ordered pair when the vertex count is at most this.
  std::size_t exhaustive_limit = 200;
  /// Uniform random ordered pairs otherwise.
  std::size_t samples = 500;
  std::uint64_t seed = 0xC11CE;
};

struct TransitivityCheck {
  std::size_t pairs = 0;
  bool exhaustive = false;
  std::size_t failures = 0;
  /// First failing (source, target) vertex pair.
  std::optional<std::pair<std::size_t, std::size_t>> first_failure;
  bool passed() const { return failures == 0; }
};

/// For each pair: build the witness, require A^T B A = B, a permutation of the
/// vertex set sending source to target, and zero adjacency mismatches.
TransitivityCheck check_transitivity(const QuadraticSpace& space, const Graph& g,
                                     const TransitivityOptions& options = {});

}  // namespace orthograph
