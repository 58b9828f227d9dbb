#include "orthograph/isometry.hpp"

#include <bit>
#include <random>
#include <stdexcept>

namespace orthograph {

namespace {

using Code = Field::Code;
using Vec = std::vector<Code>;

Vec scaled(const Field& f, const Vec& v, Code s) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.mul(v[i], s);
  return out;
}

// Scales v so that beta(v, v) = target. Returns nullopt when beta(v, v) is
// zero or lies in the wrong square class.
std::optional<Vec> scale_to(const QuadraticSpace& space, const Vec& v, Code target) {
  const Field& f = space.field();
  const Code value = space.form(v);
  if (value == 0) return std::nullopt;
  const auto root = f.sqrt(f.mul(value, f.inv(target)));
  if (!root) return std::nullopt;
  return scaled(f, v, f.inv(*root));
}

std::size_t base_column(const QuadraticSpace& space, PointClass c) {
  switch (c) {
    case PointClass::Square:
      return space.dimension() - 1;
    case PointClass::Nonsquare:
      return 0;
    case PointClass::Singular:
      break;
  }
  throw std::invalid_argument("isotropic points carry no isometry frame");
}

// First vector of <basis> (scanned in canonical projective order) whose form
// value scales to `target`, already scaled.
std::optional<Vec> first_scalable(const QuadraticSpace& space, const std::vector<Vec>& basis, Code target) {
  const Field& f = space.field();
  const std::size_t k = space.dimension();
  std::optional<Vec> found;
  // for_each_projective_point has no early exit; the perp spaces here are small.
  for_each_projective_point(f, basis.size(), [&](const ProjectivePoint& coef) {
    if (found) return;
    Vec c(k, 0);
    for (std::size_t t = 0; t < basis.size(); ++t) {
      if (coef.coords[t] == 0) continue;
      for (std::size_t i = 0; i < k; ++i) c[i] = f.add(c[i], f.mul(coef.coords[t], basis[t][i]));
    }
    found = scale_to(space, c, target);
  });
  return found;
}

}  // namespace

FieldMatrix gram_matrix(const QuadraticSpace& space) {
  const std::size_t k = space.dimension();
  FieldMatrix b(space.field(), k, k);
  for (std::size_t i = 0; i < k; ++i) b(i, i) = space.weights()[i];
  return b;
}

bool is_isometry(const QuadraticSpace& space, const FieldMatrix& a) {
  const auto b = gram_matrix(space);
  return a.rows() == b.rows() && a.cols() == b.cols() && a.transpose() * b * a == b;
}

FieldMatrix isometry_inverse(const QuadraticSpace& space, const FieldMatrix& a) {
  const Field& f = space.field();
  auto b_inv = gram_matrix(space);
  for (std::size_t i = 0; i < b_inv.rows(); ++i) b_inv(i, i) = f.inv(b_inv(i, i));
  return b_inv * a.transpose() * gram_matrix(space);
}

ProjectivePoint base_point(const QuadraticSpace& space, PointClass c) {
  Vec e(space.dimension(), 0);
  e[base_column(space, c)] = space.field().one_code();
  return *space.normalize(e);
}

FieldMatrix orthonormal_frame(const QuadraticSpace& space, const ProjectivePoint& y) {
  const Field& f = space.field();
  const std::size_t k = space.dimension();
  const auto weights = space.weights();
  const std::size_t base = base_column(space, space.classify(y));

  FieldMatrix a(f, k, k);
  std::vector<Vec> chosen;
  auto take = [&](std::size_t col, const Vec& c) {
    a.set_column(col, c);
    chosen.push_back(c);
  };
  take(base, *scale_to(space, y.coords, weights[base]));

  for (std::size_t col = k; col-- > 0;) {
    if (col == base) continue;
    // Perp space of the chosen columns: rows (B c_j)^T.
    FieldMatrix constraints(f, chosen.size(), k);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      for (std::size_t i = 0; i < k; ++i) constraints(j, i) = f.mul(weights[i], chosen[j][i]);
    }
    const auto basis = nullspace(constraints);
    const auto c = first_scalable(space, basis, weights[col]);
    if (!c) throw std::logic_error("no admissible column in the perp space of " + format_point(f, y));
    take(col, *c);
  }
  return a;
}

IsometryWitness transitivity_witness(const QuadraticSpace& space, const ProjectivePoint& x, const ProjectivePoint& y) {
  if (space.dimension() < 2) throw std::invalid_argument("transitivity witnesses need k >= 2");
  const auto cx = space.classify(x);
  if (cx != space.classify(y)) {
    throw std::invalid_argument("points " + format_point(space.field(), x) + " and " + format_point(space.field(), y) +
                                " lie in different classes");
  }
  if (cx == PointClass::Singular) throw std::invalid_argument("isotropic points carry no isometry frame");
  const auto ax = orthonormal_frame(space, x);
  const auto ay = orthonormal_frame(space, y);
  return {ay * isometry_inverse(space, ax), x, y};
}

std::vector<std::size_t> apply_isometry(const IsometryWitness& w, const QuadraticSpace& space, const Graph& g) {
  const auto& labels = g.labels();
  if (labels.size() != g.size()) throw std::invalid_argument("graph carries no point labels");
  std::vector<std::size_t> perm(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto image = space.normalize(w.matrix.apply(labels[v].coords));
    const auto target = image ? g.vertex_of_point(image->index) : std::nullopt;
    if (!target) throw std::invalid_argument("isometry moves a vertex outside the graph");
    perm[v] = *target;
  }
  return perm;
}

bool is_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

std::size_t adjacency_mismatches(const Graph& g, const std::vector<std::size_t>& perm) {
  std::size_t bad = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    const auto source = g.row(u);
    const auto image = g.row(perm[u]);
    for (std::size_t w = 0; w < source.size(); ++w) {
      std::uint64_t bits = source[w];
      while (bits) {
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (!((image[perm[v] / 64] >> (perm[v] % 64)) & 1U)) ++bad;
      }
    }
  }
  return bad;
}

NeighborhoodMap neighborhood_isomorphism(const QuadraticSpace& space, const Graph& g, std::size_t v,
                                         const Graph& lower) {
  const std::size_t k = space.dimension();
  if (k < 3) throw std::invalid_argument("neighborhood isomorphism needs k >= 3");
  const auto& labels = g.labels();
  if (labels.size() != g.size() || v >= g.size()) throw std::invalid_argument("vertex has no point label");
  const auto& center = labels[v];
  if (space.classify(center) != PointClass::Square) throw std::invalid_argument("center must be a square point");

  const auto to_base = transitivity_witness(space, center, base_point(space, PointClass::Square));
  const auto lower_space = space.restricted(k - 1);

  NeighborhoodMap map;
  map.center = v;
  map.neighbors = g.neighbors(v);
  map.image.reserve(map.neighbors.size());
  for (auto u : map.neighbors) {
    auto z = to_base.matrix.apply(labels[u].coords);
    if (z.back() != 0) throw std::logic_error("neighbor image leaves the hyperplane y_k = 0");
    z.pop_back();
    const auto point = lower_space.normalize(z);
    const auto target = point ? lower.vertex_of_point(point->index) : std::nullopt;
    if (!target) throw std::logic_error("neighbor image is not a vertex of the lower graph");
    map.image.push_back(*target);
  }
  return map;
}

NeighborhoodCheck check_neighborhood_map(const Graph& g, const NeighborhoodMap& map, const Graph& lower) {
  NeighborhoodCheck check;
  check.bijective = map.image.size() == map.neighbors.size() && is_permutation(map.image, lower.size());
  if (!check.bijective) return check;
  const std::size_t n = map.neighbors.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g.adjacent(map.neighbors[i], map.neighbors[j]) != lower.adjacent(map.image[i], map.image[j])) {
        ++check.mismatched_bits;
      }
    }
  }
  return check;
}

TransitivityCheck check_transitivity(const QuadraticSpace& space, const Graph& g, const TransitivityOptions& options) {
  const std::size_t n = g.size();
  const auto& labels = g.labels();
  TransitivityCheck check;
  auto run = [&](std::size_t x, std::size_t y) {
    ++check.pairs;
    bool ok = false;
    try {
      const auto w = transitivity_witness(space, labels[x], labels[y]);
      if (is_isometry(space, w.matrix)) {
        const auto perm = apply_isometry(w, space, g);
        ok = perm[x] == y && is_permutation(perm, n) && adjacency_mismatches(g, perm) == 0;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) {
      ++check.failures;
      if (!check.first_failure) check.first_failure = {x, y};
    }
  };
  if (n == 0) return check;
  if (n <= options.exhaustive_limit) {
    check.exhaustive = true;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) run(x, y);
    }
    return check;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < options.samples; ++s) {
    const std::size_t x = pick(rng);
    const std::size_t y = pick(rng);
    run(x, y);
  }
  return check;
}

}  // namespace orthograph
