#include "orthograph/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace orthograph {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Number of points whose leading coordinate sits after position j.
std::size_t leading_offset(std::size_t q, std::size_t k, std::size_t j) {
  return (ipow(q, k - 1 - j) - 1) / (q - 1);
}

}  // namespace

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::Singular:
      return "singular";
    case PointClass::Square:
      return "square";
    case PointClass::Nonsquare:
      return "nonsquare";
  }
  return "?";
}

std::size_t Census::count(PointClass c) const {
  switch (c) {
    case PointClass::Singular:
      return singular;
    case PointClass::Square:
      return square;
    case PointClass::Nonsquare:
      return nonsquare;
  }
  return 0;
}

QuadraticSpace::QuadraticSpace(Field field, std::size_t k, std::vector<Field::Code> weights, bool standard)
    : field_(std::move(field)), k_(k), weights_(std::move(weights)), standard_(standard) {
  if (k_ < 1) throw std::invalid_argument("dimension must be at least 1");
}

QuadraticSpace::QuadraticSpace(Field field, std::size_t k)
    : QuadraticSpace(field, k, field.smallest_nonsquare()) {}

QuadraticSpace::QuadraticSpace(Field field, std::size_t k, Field::Code xi)
    : QuadraticSpace(field, k, std::vector<Field::Code>(std::max<std::size_t>(k, 1), field.one_code()), false) {
  if (field_.character(xi) != -1) throw FieldError("xi must be a non-square");
  weights_.front() = xi;
}

QuadraticSpace QuadraticSpace::standard(Field field, std::size_t k) {
  const auto one = field.one_code();
  return QuadraticSpace(std::move(field), k, std::vector<Field::Code>(std::max<std::size_t>(k, 1), one), true);
}

QuadraticSpace QuadraticSpace::restricted(std::size_t k) const {
  if (k < 1) throw std::invalid_argument("dimension must be at least 1");
  std::vector<Field::Code> w(k, field_.one_code());
  w.front() = weights_.front();
  return QuadraticSpace(field_, k, std::move(w), standard_);
}

Field::Code QuadraticSpace::form(std::span<const Field::Code> x) const { return bilinear(x, x); }

Field::Code QuadraticSpace::bilinear(std::span<const Field::Code> x, std::span<const Field::Code> y) const {
  if (x.size() != k_ || y.size() != k_) throw std::invalid_argument("vector length does not match dimension");
  Field::Code acc = 0;
  for (std::size_t i = 0; i < k_; ++i) {
    acc = field_.add(acc, field_.mul(weights_[i], field_.mul(x[i], y[i])));
  }
  return acc;
}

PointClass QuadraticSpace::classify(std::span<const Field::Code> x) const {
  switch (field_.character(form(x))) {
    case 0:
      return PointClass::Singular;
    case 1:
      return PointClass::Square;
    default:
      return PointClass::Nonsquare;
  }
}

bool QuadraticSpace::orthogonal(const ProjectivePoint& x, const ProjectivePoint& y) const {
  return bilinear(x.coords, y.coords) == 0;
}

std::size_t QuadraticSpace::point_count() const { return leading_offset(field_.order(), k_ + 1, 0); }

std::optional<ProjectivePoint> QuadraticSpace::normalize(std::span<const Field::Code> v) const {
  if (v.size() != k_) throw std::invalid_argument("vector length does not match dimension");
  std::size_t lead = 0;
  while (lead < k_ && v[lead] == 0) ++lead;
  if (lead == k_) return std::nullopt;
  ProjectivePoint out;
  out.coords.assign(v.begin(), v.end());
  const Field::Code scale = field_.inv(v[lead]);
  for (auto& c : out.coords) c = field_.mul(c, scale);
  out.index = index_of(out.coords);
  return out;
}

std::size_t QuadraticSpace::index_of(std::span<const Field::Code> canonical) const {
  std::size_t lead = 0;
  while (lead < k_ && canonical[lead] == 0) ++lead;
  if (lead == k_ || canonical[lead] != field_.one_code()) {
    throw std::invalid_argument("vector is not a canonical representative");
  }
  const std::size_t q = field_.order();
  std::size_t rank = 0;
  for (std::size_t i = lead + 1; i < k_; ++i) rank = rank * q + canonical[i];
  return leading_offset(q, k_, lead) + rank;
}

ProjectivePoint QuadraticSpace::point_at(std::size_t index) const {
  if (index >= point_count()) throw std::out_of_range("point index out of range");
  const std::size_t q = field_.order();
  ProjectivePoint out;
  out.coords.assign(k_, 0);
  out.index = index;
  for (std::size_t lead = k_; lead-- > 0;) {
    const std::size_t start = leading_offset(q, k_, lead);
    const std::size_t span = ipow(q, k_ - 1 - lead);
    if (index < start + span) {
      std::size_t rank = index - start;
      for (std::size_t i = k_; i-- > lead + 1;) {
        out.coords[i] = static_cast<Field::Code>(rank % q);
        rank /= q;
      }
      out.coords[lead] = field_.one_code();
      return out;
    }
  }
  throw std::logic_error("point_at: unreachable");
}

void for_each_projective_point(const Field& field, std::size_t k,
                               const std::function<void(const ProjectivePoint&)>& visit) {
  const auto q = static_cast<Field::Code>(field.order());
  ProjectivePoint pt;
  pt.coords.assign(k, 0);
  pt.index = 0;
  for (std::size_t lead = k; lead-- > 0;) {
    std::fill(pt.coords.begin(), pt.coords.end(), 0);
    pt.coords[lead] = field.one_code();
    while (true) {
      visit(pt);
      ++pt.index;
      // Odometer over the trailing coordinates, last one fastest.
      bool exhausted = true;
      for (std::size_t i = k; i > lead + 1;) {
        --i;
        if (++pt.coords[i] < q) {
          exhausted = false;
          break;
        }
        pt.coords[i] = 0;
      }
      if (exhausted) break;
    }
  }
}

void QuadraticSpace::for_each_point(const std::function<void(const ProjectivePoint&)>& visit) const {
  for_each_projective_point(field_, k_, visit);
}

std::vector<ProjectivePoint> QuadraticSpace::points(std::size_t cap) const {
  const std::size_t count = point_count();
  if (count > cap) {
    throw CapExceeded("PG(" + std::to_string(k_ - 1) + "," + std::to_string(field_.order()) + ") has " +
                      std::to_string(count) + " points, above the cap of " + std::to_string(cap));
  }
  std::vector<ProjectivePoint> out;
  out.reserve(count);
  for_each_point([&](const ProjectivePoint& p) { out.push_back(p); });
  return out;
}

Census QuadraticSpace::census() const {
  Census c;
  for_each_point([&](const ProjectivePoint& p) {
    switch (classify(p)) {
      case PointClass::Singular:
        ++c.singular;
        break;
      case PointClass::Square:
        ++c.square;
        break;
      case PointClass::Nonsquare:
        ++c.nonsquare;
        break;
    }
  });
  return c;
}

std::string format_point(const Field& field, std::span<const Field::Code> coords) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ':';
    out += field.format(coords[i]);
  }
  return out;
}

std::string format_point(const Field& field, const ProjectivePoint& x) { return format_point(field, x.coords); }

ProjectivePoint parse_point(const QuadraticSpace& space, const std::string& text) {
  std::vector<Field::Code> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) coords.push_back(space.field().parse(item));
  if (coords.size() != space.dimension()) {
    throw std::invalid_argument("point '" + text + "' has " + std::to_string(coords.size()) +
                                " coordinates, expected " + std::to_string(space.dimension()));
  }
  auto p = space.normalize(coords);
  if (!p) throw std::invalid_argument("the zero vector is not a projective point");
  return *p;
}

}  // namespace orthograph
