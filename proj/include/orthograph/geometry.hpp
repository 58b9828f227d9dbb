#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthograph/field.hpp"

namespace orthograph {

inline constexpr std::size_t kDefaultVertexCap = 20000;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PointClass { Singular, Square, Nonsquare };

std::string to_string(PointClass c);

/// Canonical representative of a 1-space: first nonzero coordinate is one.
/// Coordinates are field element codes.
struct ProjectivePoint {
  std::vector<Field::Code> coords;
  std::size_t index = 0;

  bool operator==(const ProjectivePoint&) const = default;
};

struct Census {
  std::size_t singular = 0;
  std::size_t square = 0;
  std::size_t nonsquare = 0;

  std::size_t total() const { return singular + square + nonsquare; }
  std::size_t count(PointClass c) const;
  bool operator==(const Census&) const = default;
};

/**
 * GF(q)^k with the diagonal form Q(x) = xi*x_1^2 + x_2^2 + ... + x_k^2.
 *
 * xi defaults to the field's smallest non-square. The standard form
 * (leading coefficient one) is available through standard(); it backs the
 * comparison graph and is not a non-square form.
 */
class QuadraticSpace {
 public:
  QuadraticSpace(Field field, std::size_t k);
  /// Throws FieldError if xi is not a non-square.
  QuadraticSpace(Field field, std::size_t k, Field::Code xi);

  /// x_1 y_1 + ... + x_k y_k.
  static QuadraticSpace standard(Field field, std::size_t k);

  const Field& field() const { return field_; }
  std::size_t dimension() const { return k_; }
  Field::Code xi() const { return weights_.front(); }
  bool is_standard() const { return standard_; }
  /// Diagonal of the Gram matrix: (xi, 1, ..., 1).
  std::span<const Field::Code> weights() const { return weights_; }

  /// Same field and leading coefficient, one dimension lower.
  QuadraticSpace restricted(std::size_t k) const;

  Field::Code form(std::span<const Field::Code> x) const;
  Field::Code bilinear(std::span<const Field::Code> x, std::span<const Field::Code> y) const;
  PointClass classify(std::span<const Field::Code> x) const;
  PointClass classify(const ProjectivePoint& x) const { return classify(x.coords); }
  bool orthogonal(const ProjectivePoint& x, const ProjectivePoint& y) const;

  /// (q^k - 1)/(q - 1).
  std::size_t point_count() const;
  /// Scales a nonzero vector to its canonical representative; nullopt for zero.
  std::optional<ProjectivePoint> normalize(std::span<const Field::Code> v) const;
  /// Position of a canonical representative in the enumeration order.
  std::size_t index_of(std::span<const Field::Code> canonical) const;
  ProjectivePoint point_at(std::size_t index) const;

  /// Visits every point in canonical order without materializing the list.
  void for_each_point(const std::function<void(const ProjectivePoint&)>& visit) const;
  /// Throws CapExceeded when point_count() > cap.
  std::vector<ProjectivePoint> points(std::size_t cap = kDefaultVertexCap) const;
  Census census() const;

 private:
  QuadraticSpace(Field field, std::size_t k, std::vector<Field::Code> weights, bool standard);

  Field field_;
  std::size_t k_;
  std::vector<Field::Code> weights_;
  bool standard_ = false;
};

/// Visits the canonical points of PG(k-1, q) in canonical order: more leading
/// zeros first, then lexicographic on the trailing coordinates.
void for_each_projective_point(const Field& field, std::size_t k,
                               const std::function<void(const ProjectivePoint&)>& visit);

/// Colon-separated coordinates, e.g. "0:1:2" or "1,0:0,2" over GF(9).
std::string format_point(const Field& field, std::span<const Field::Code> coords);
std::string format_point(const Field& field, const ProjectivePoint& x);
/// Parses format_point output (any nonzero vector) and canonicalizes it.
ProjectivePoint parse_point(const QuadraticSpace& space, const std::string& text);

}  // namespace orthograph
