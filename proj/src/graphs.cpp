#include "orthograph/graphs.hpp"

#include <algorithm>
#include <ostream>

#include "orthograph/parallel.hpp"

namespace orthograph {

namespace {

constexpr std::size_t kMaxEnumeratedPoints = 50'000'000;

GraphMeta base_meta(const QuadraticSpace& space, std::string family) {
  const Field& f = space.field();
  GraphMeta meta;
  meta.family = std::move(family);
  meta.k = space.dimension();
  meta.p = f.characteristic();
  meta.e = f.degree();
  meta.q = f.order();
  meta.xi = space.xi();
  meta.modulus.assign(f.modulus().begin(), f.modulus().end());
  return meta;
}

// Builds the orthogonality graph on the points accepted by `keep`. Each row is
// filled by walking the hyperplane x^perp, so the cost is n * |PG(k-2,q)|
// rather than n^2.
template <typename Keep>
Graph build_orthogonality(const QuadraticSpace& space, GraphMeta meta, bool with_loops, const BuildOptions& options,
                          Keep keep) {
  const Field& field = space.field();
  const std::size_t k = space.dimension();
  const std::size_t total = space.point_count();
  if (total > kMaxEnumeratedPoints) throw CapExceeded("projective space too large to enumerate");

  std::vector<std::int64_t> vertex_of(total, -1);
  std::vector<ProjectivePoint> labels;
  space.for_each_point([&](const ProjectivePoint& pt) {
    if (!keep(pt)) return;
    if (labels.size() >= options.vertex_cap) {
      throw CapExceeded(describe(meta) + " has more than " + std::to_string(options.vertex_cap) + " vertices");
    }
    vertex_of[pt.index] = static_cast<std::int64_t>(labels.size());
    labels.push_back(pt);
  });

  const std::size_t n = labels.size();
  Graph g(n, std::move(meta), labels);
  if (k == 1 || n == 0) {
    if (with_loops) {
      for (std::size_t v = 0; v < n; ++v) {
        if (space.form(labels[v].coords) == 0) g.set_loop(v);
      }
    }
    return g;
  }

  // Canonical points of PG(k-2, q) fill the free coordinates of x^perp.
  const auto free_space = space.restricted(k - 1);
  std::vector<Field::Code> free_points;
  free_points.reserve(free_space.point_count() * (k - 1));
  free_space.for_each_point(
      [&](const ProjectivePoint& pt) { free_points.insert(free_points.end(), pt.coords.begin(), pt.coords.end()); });
  const std::size_t free_count = free_space.point_count();
  const auto weights = space.weights();

  parallel_for(n, options.threads, [&](std::size_t u) {
    const auto& x = labels[u].coords;
    std::vector<Field::Code> a(k);
    for (std::size_t i = 0; i < k; ++i) a[i] = field.mul(weights[i], x[i]);
    std::size_t pivot = k;
    while (pivot > 0 && a[pivot - 1] == 0) --pivot;
    --pivot;
    const Field::Code minus_inv_pivot = field.neg(field.inv(a[pivot]));

    auto row = g.mutable_row(u);
    std::vector<Field::Code> y(k);
    for (std::size_t t = 0; t < free_count; ++t) {
      const Field::Code* fp = free_points.data() + t * (k - 1);
      Field::Code s = 0;
      std::size_t free_lead = k;
      for (std::size_t i = 0, f = 0; i < k; ++i) {
        if (i == pivot) continue;
        y[i] = fp[f++];
        if (y[i] != 0) {
          if (free_lead == k) free_lead = i;
          s = field.add(s, field.mul(a[i], y[i]));
        }
      }
      y[pivot] = field.mul(s, minus_inv_pivot);
      if (y[pivot] != 0 && pivot < free_lead) {
        const Field::Code scale = field.inv(y[pivot]);
        for (auto& c : y) c = field.mul(c, scale);
      }
      const std::int64_t w = vertex_of[space.index_of(y)];
      if (w < 0 || static_cast<std::size_t>(w) == u) continue;
      row[static_cast<std::size_t>(w) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(w) % 64);
    }
  });

  if (with_loops) {
    for (std::size_t v = 0; v < n; ++v) {
      if (space.form(labels[v].coords) == 0) g.set_loop(v);
    }
  }
  return g;
}

}  // namespace

std::string describe(const GraphMeta& meta) {
  std::string out = meta.family + "(k=" + std::to_string(meta.k) + ",q=" + std::to_string(meta.q);
  if (meta.epsilon) out += "," + to_string(*meta.epsilon);
  out += ")";
  for (auto c : meta.neighborhood_path) out += "/N(" + std::to_string(c) + ")";
  return out;
}

Graph::Graph(std::size_t n, GraphMeta meta, std::vector<ProjectivePoint> labels)
    : n_(n),
      words_((n + 63) / 64),
      bits_(n * ((n + 63) / 64), 0),
      loops_((n + 63) / 64, 0),
      labels_(std::move(labels)),
      meta_(std::move(meta)) {
  if (!labels_.empty() && labels_.size() != n_) throw std::invalid_argument("label count does not match vertex count");
}

std::size_t Graph::loop_count() const {
  std::size_t c = 0;
  for (auto w : loops_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t Graph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (auto w : row(v)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::vector<std::size_t> Graph::neighbors(std::size_t v) const {
  std::vector<std::size_t> out;
  const auto r = row(v);
  for (std::size_t wi = 0; wi < words_; ++wi) {
    std::uint64_t w = r[wi];
    while (w) {
      const std::size_t u = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
      w &= w - 1;
      if (u != v) out.push_back(u);
    }
  }
  return out;
}

void Graph::connect(std::size_t u, std::size_t v) {
  if (u == v) {
    set_loop(u);
    return;
  }
  bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
}

void Graph::set_loop(std::size_t v) {
  loops_[v / 64] |= std::uint64_t{1} << (v % 64);
  bits_[v * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
}

std::optional<std::size_t> Graph::vertex_of_point(std::size_t point_index) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), point_index,
                             [](const ProjectivePoint& p, std::size_t idx) { return p.index < idx; });
  if (it == labels_.end() || it->index != point_index) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

bool Graph::operator==(const Graph& other) const {
  return n_ == other.n_ && bits_ == other.bits_ && loops_ == other.loops_ && labels_ == other.labels_ &&
         meta_ == other.meta_;
}

Graph build_gamma(const QuadraticSpace& space, PointClass epsilon, const BuildOptions& options) {
  if (epsilon == PointClass::Singular) throw std::invalid_argument("epsilon must be square or nonsquare");
  if (space.is_standard()) throw std::invalid_argument("gamma graphs use the non-square form");
  GraphMeta meta = base_meta(space, kFamilyGamma);
  meta.epsilon = epsilon;
  return build_orthogonality(space, std::move(meta), false, options,
                             [&](const ProjectivePoint& p) { return space.classify(p) == epsilon; });
}

Graph build_gamma_prime(const QuadraticSpace& space, const BuildOptions& options) {
  if (space.is_standard()) throw std::invalid_argument("gamma-prime uses the non-square form");
  return build_orthogonality(space, base_meta(space, kFamilyGammaPrime), true, options,
                             [](const ProjectivePoint&) { return true; });
}

Graph build_ak(const Field& field, std::size_t k, const BuildOptions& options) {
  const auto space = QuadraticSpace::standard(field, k);
  return build_orthogonality(space, base_meta(space, kFamilyAlonKrivelevich), false, options,
                             [&](const ProjectivePoint& p) { return space.form(p.coords) != 0; });
}

Graph induced_subgraph(const Graph& g, std::span<const std::size_t> vertices) {
  std::vector<ProjectivePoint> labels;
  if (!g.labels().empty()) {
    labels.reserve(vertices.size());
    for (auto v : vertices) labels.push_back(g.labels()[v]);
  }
  Graph h(vertices.size(), g.meta(), std::move(labels));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (g.has_loop(vertices[i])) h.set_loop(i);
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (g.adjacent(vertices[i], vertices[j])) h.connect(i, j);
    }
  }
  return h;
}

Graph induced_neighborhood(const Graph& g, std::size_t v) {
  if (v >= g.size()) throw std::out_of_range("vertex out of range");
  const auto nbrs = g.neighbors(v);
  Graph h = induced_subgraph(g, nbrs);
  h.mutable_meta().neighborhood_path.push_back(v);
  return h;
}

Graph rebuild(const GraphMeta& meta, const BuildOptions& options) {
  const Field field = Field::create(meta.p, meta.e);
  if (!std::equal(field.modulus().begin(), field.modulus().end(), meta.modulus.begin(), meta.modulus.end())) {
    throw std::invalid_argument("modulus in descriptor does not match the canonical modulus");
  }
  Graph g;
  if (meta.family == kFamilyAlonKrivelevich) {
    g = build_ak(field, meta.k, options);
  } else if (meta.family == kFamilyGammaPrime) {
    g = build_gamma_prime(QuadraticSpace(field, meta.k, meta.xi), options);
  } else if (meta.family == kFamilyGamma && meta.epsilon) {
    g = build_gamma(QuadraticSpace(field, meta.k, meta.xi), *meta.epsilon, options);
  } else {
    throw std::invalid_argument("unknown graph family '" + meta.family + "'");
  }
  for (auto v : meta.neighborhood_path) g = induced_neighborhood(g, v);
  return g;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.n = g.size();
  if (s.n == 0) return s;
  s.degree_min = SIZE_MAX;
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < s.n; ++v) {
    const std::size_t d = g.degree(v);
    s.degree_min = std::min(s.degree_min, d);
    s.degree_max = std::max(s.degree_max, d);
    degree_sum += d;
  }
  s.loop_count = g.loop_count();
  s.edge_count = (degree_sum - s.loop_count) / 2;
  s.is_regular = s.degree_min == s.degree_max;
  s.d = s.is_regular ? s.degree_min : 0;
  return s;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto stats = graph_stats(g);
  const auto& meta = g.meta();
  out << "# " << meta.family << ' ' << meta.k << ' ' << meta.q << ' '
      << (meta.epsilon ? to_string(*meta.epsilon) : std::string("-")) << ' ' << g.size() << ' '
      << stats.edge_count + stats.loop_count << '\n';
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (g.has_loop(u)) out << u << ' ' << u << '\n';
    for (auto v : g.neighbors(u)) {
      if (v > u) out << u << ' ' << v << '\n';
    }
  }
}

void write_dimacs(std::ostream& out, const Graph& g) {
  const auto stats = graph_stats(g);
  out << "c " << describe(g.meta()) << '\n';
  out << "p edge " << g.size() << ' ' << stats.edge_count << '\n';
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (auto v : g.neighbors(u)) {
      if (v > u) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    }
  }
}

}  // namespace orthograph
