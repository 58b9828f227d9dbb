#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "orthograph/geometry.hpp"

using namespace orthograph;

namespace {

// Census by walking every nonzero vector of GF(q)^k; each projective point
// is hit q - 1 times.
Census brute_force_census(const QuadraticSpace& s) {
  const Field& f = s.field();
  const std::size_t k = s.dimension();
  std::vector<Field::Code> v(k, 0);
  Census c;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= f.order();
  for (std::size_t code = 1; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < k; ++i) {
      v[i] = static_cast<Field::Code>(rest % f.order());
      rest /= f.order();
    }
    Field::Code value = 0;
    for (std::size_t i = 0; i < k; ++i) value = f.add(value, f.mul(s.weights()[i], f.mul(v[i], v[i])));
    if (value == 0) {
      ++c.singular;
    } else if (f.character(value) == 1) {
      ++c.square;
    } else {
      ++c.nonsquare;
    }
  }
  c.singular /= f.order() - 1;
  c.square /= f.order() - 1;
  c.nonsquare /= f.order() - 1;
  return c;
}

}  // namespace

TEST(Geometry, CensusMatchesBruteForceEnumeration) {
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::uint32_t q : {3U, 5U, 7U, 9U, 11U, 13U}) {
      if (k == 4 && q > 9) continue;
      const QuadraticSpace s(Field::of_order(q), k);
      EXPECT_EQ(s.census(), brute_force_census(s)) << "k=" << k << " q=" << q;
    }
  }
}

TEST(Geometry, CensusFixtures) {
  // Independent enumeration: (k, q) -> (singular, square, nonsquare).
  const std::map<std::pair<std::size_t, std::uint32_t>, Census> fixtures = {
      {{2, 3}, {2, 1, 1}},     {{2, 5}, {0, 3, 3}},      {{3, 3}, {4, 6, 3}},      {{3, 5}, {6, 10, 15}},
      {{3, 9}, {10, 36, 45}},  {{3, 13}, {14, 78, 91}},  {{4, 3}, {10, 15, 15}},   {{4, 7}, {50, 175, 175}},
      {{4, 9}, {82, 369, 369}}};
  for (const auto& [key, census] : fixtures) {
    const QuadraticSpace s(Field::of_order(key.second), key.first);
    EXPECT_EQ(s.census(), census) << "k=" << key.first << " q=" << key.second;
  }
}

TEST(Geometry, SquareClassOnTheLineHasHalfThePoints) {
  for (std::uint32_t q : {3U, 5U, 7U, 9U, 11U, 13U}) {
    const auto c = QuadraticSpace(Field::of_order(q), 2).census();
    EXPECT_TRUE(c.square == (q - 1) / 2 || c.square == (q + 1) / 2) << q;
  }
}

TEST(Geometry, EnumerationIsCanonicalAndIndexed) {
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::uint32_t q : {3U, 5U, 9U}) {
      const QuadraticSpace s(Field::of_order(q), k);
      const auto pts = s.points();
      std::size_t expected = 0;
      for (std::size_t i = 0, power = 1; i < k; ++i, power *= q) expected += power;
      ASSERT_EQ(pts.size(), expected);
      ASSERT_EQ(s.point_count(), expected);
      std::set<std::vector<Field::Code>> seen;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        EXPECT_EQ(p.index, i);
        EXPECT_EQ(s.index_of(p.coords), i);
        EXPECT_EQ(s.point_at(i), p);
        const auto lead = std::find_if(p.coords.begin(), p.coords.end(), [](auto c) { return c != 0; });
        ASSERT_NE(lead, p.coords.end());
        EXPECT_EQ(*lead, s.field().one_code());
        EXPECT_TRUE(seen.insert(p.coords).second);
      }
      // More leading zeros first.
      if (k >= 2) EXPECT_EQ(pts.front().coords.back(), s.field().one_code());
    }
  }
}

TEST(Geometry, NormalizeScalesToTheCanonicalRepresentative) {
  const QuadraticSpace s(Field::of_order(7), 3);
  const auto p = s.normalize(std::vector<Field::Code>{0, 3, 5});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->coords, (std::vector<Field::Code>{0, 1, 4}));  // 5 / 3 = 4 mod 7
  EXPECT_FALSE(s.normalize(std::vector<Field::Code>{0, 0, 0}));
}

TEST(Geometry, BilinearFormPolarizesTheQuadraticForm) {
  std::mt19937 rng(3);
  for (std::uint32_t q : {3U, 5U, 9U, 25U}) {
    const QuadraticSpace s(Field::of_order(q), 4);
    const Field& f = s.field();
    std::uniform_int_distribution<Field::Code> pick(0, q - 1);
    for (int t = 0; t < 500; ++t) {
      std::vector<Field::Code> x(4), y(4), sum(4);
      for (int i = 0; i < 4; ++i) {
        x[i] = pick(rng);
        y[i] = pick(rng);
        sum[i] = f.add(x[i], y[i]);
      }
      const auto two_beta = f.add(s.bilinear(x, y), s.bilinear(x, y));
      EXPECT_EQ(two_beta, f.sub(f.sub(s.form(sum), s.form(x)), s.form(y)));
      EXPECT_EQ(s.bilinear(x, y), s.bilinear(y, x));
      EXPECT_EQ(s.bilinear(x, x), s.form(x));
    }
  }
}

TEST(Geometry, LineClassesAreSwappedByABijection) {
  // (a, b) -> (b, xi a) multiplies Q by xi.
  for (std::uint32_t q : {3U, 5U, 7U, 9U, 11U, 13U}) {
    const QuadraticSpace s(Field::of_order(q), 2);
    const Field& f = s.field();
    std::set<std::size_t> image;
    std::size_t squares = 0;
    s.for_each_point([&](const ProjectivePoint& p) {
      if (s.classify(p) != PointClass::Square) return;
      ++squares;
      const auto mapped = s.normalize(std::vector<Field::Code>{p.coords[1], f.mul(s.xi(), p.coords[0])});
      ASSERT_TRUE(mapped);
      EXPECT_EQ(s.classify(*mapped), PointClass::Nonsquare);
      image.insert(mapped->index);
    });
    EXPECT_EQ(image.size(), squares);
    EXPECT_EQ(s.census().nonsquare, squares);
  }
}

TEST(Geometry, ConstructorChecksTheLeadingCoefficient) {
  const Field f = Field::of_order(7);
  EXPECT_THROW(QuadraticSpace(f, 3, 2), FieldError);  // 2 = 3^2 mod 7
  EXPECT_NO_THROW(QuadraticSpace(f, 3, 5));
  EXPECT_EQ(QuadraticSpace(f, 3).xi(), 3U);
  const auto standard = QuadraticSpace::standard(f, 3);
  EXPECT_TRUE(standard.is_standard());
  EXPECT_EQ(standard.xi(), 1U);
}

TEST(Geometry, PointsRespectTheCap) {
  const QuadraticSpace s(Field::of_order(13), 5);
  EXPECT_THROW(s.points(1000), CapExceeded);
}

TEST(Geometry, PointTextRoundTrip) {
  const QuadraticSpace s(Field::of_order(9), 3);
  s.for_each_point([&](const ProjectivePoint& p) { EXPECT_EQ(parse_point(s, format_point(s.field(), p)), p); });
  EXPECT_EQ(format_point(Field::of_order(5), std::vector<Field::Code>{0, 1, 2}), "0:1:2");
  const QuadraticSpace five(Field::of_order(5), 3);
  EXPECT_EQ(parse_point(five, "0:2:4").coords, (std::vector<Field::Code>{0, 1, 2}));
  EXPECT_ANY_THROW(parse_point(five, "0:0:0"));
  EXPECT_ANY_THROW(parse_point(five, "1:2"));
}
