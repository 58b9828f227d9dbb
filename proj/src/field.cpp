#include "orthograph/field.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace orthograph {

namespace detail {

struct FieldTables {
  std::uint32_t p = 0;
  std::uint32_t e = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;
  // weight[i] = p^(e-1-i): coefficient i's place value in the code.
  std::vector<std::uint32_t> weight;
  std::vector<Field::Code> exp;  // exp[i] = g^i, i < q - 1
  std::vector<std::uint32_t> log;
  std::vector<Field::Code> negation;
  std::vector<std::uint16_t> sum;  // q*q addition table, only for small q
  Field::Code one = 0;
  Field::Code nonsquare = 0;
};

}  // namespace detail

namespace {

using Poly = std::vector<std::uint32_t>;  // constant coefficient first

constexpr std::uint32_t kAddTableMaxOrder = 256;

std::uint32_t mod_p(std::int64_t v, std::uint32_t p) {
  auto r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo a monic g over GF(p).
Poly poly_rem(Poly f, const Poly& g, std::uint32_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    const std::uint32_t lead = f.back();
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = mod_p(static_cast<std::int64_t>(f[shift + i]) -
                               static_cast<std::int64_t>(lead) * g[i],
                           p);
    }
    trim(f);
  }
  return f;
}

// Monic polynomial of degree d whose lower coefficients are the base-p digits
// of index, c_0 most significant (canonical lexicographic order).
Poly monic_from_index(std::uint64_t index, std::uint32_t d, std::uint32_t p) {
  Poly f(d + 1, 0);
  for (std::uint32_t i = d; i-- > 0;) {
    f[i] = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
  f[d] = 1;
  return f;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const auto d = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t dd = 1; dd <= d / 2; ++dd) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < dd; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      if (poly_rem(f, monic_from_index(idx, dd, p), p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Field::Field(std::shared_ptr<const detail::FieldTables> tables) : tables_(std::move(tables)) {}

Field Field::create(std::uint32_t p, std::uint32_t e, std::uint32_t max_order) {
  if (p == 2) throw FieldError("even characteristic is not supported (q must be odd)");
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (e < 1) throw FieldError("extension degree must be at least 1");
  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q64 *= p;
    if (q64 > max_order) {
      throw FieldError("field order " + std::to_string(p) + "^" + std::to_string(e) +
                       " exceeds cap " + std::to_string(max_order));
    }
  }

  auto t = std::make_shared<detail::FieldTables>();
  t->p = p;
  t->e = e;
  t->q = static_cast<std::uint32_t>(q64);
  t->weight.assign(e, 1);
  for (std::uint32_t i = e - 1; i-- > 0;) t->weight[i] = t->weight[i + 1] * p;
  t->one = t->weight[0];

  if (e == 1) {
    t->modulus = {0, 1};
  } else {
    for (std::uint64_t idx = 0;; ++idx) {
      Poly f = monic_from_index(idx, e, p);
      if (is_irreducible(f, p)) {
        t->modulus = std::move(f);
        break;
      }
    }
  }

  Field field(t);
  const std::uint32_t q = t->q;

  t->negation.resize(q);
  for (Code a = 0; a < q; ++a) {
    std::vector<std::uint32_t> c = field.coeffs(a);
    for (auto& x : c) x = (p - x) % p;
    t->negation[a] = field.code_of_coeffs(c);
  }

  const std::uint64_t group = q - 1;
  const auto factors = prime_factors(group);
  auto slow_pow = [&](Code a, std::uint64_t n) {
    Code result = t->one;
    while (n > 0) {
      if (n & 1U) result = field.mul_schoolbook(result, a);
      a = field.mul_schoolbook(a, a);
      n >>= 1U;
    }
    return result;
  };
  Code generator = 0;
  for (Code g = 1; g < q; ++g) {
    const bool primitive = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t r) {
      return slow_pow(g, group / r) != t->one;
    });
    if (primitive) {
      generator = g;
      break;
    }
  }
  t->exp.resize(group);
  t->log.assign(q, 0);
  Code acc = t->one;
  for (std::uint64_t i = 0; i < group; ++i) {
    t->exp[i] = acc;
    t->log[acc] = static_cast<std::uint32_t>(i);
    acc = field.mul_schoolbook(acc, generator);
  }

  if (e > 1 && q <= kAddTableMaxOrder) {
    t->sum.resize(static_cast<std::size_t>(q) * q);
    for (Code a = 0; a < q; ++a) {
      const auto ca = field.coeffs(a);
      for (Code b = 0; b < q; ++b) {
        auto cb = field.coeffs(b);
        for (std::uint32_t i = 0; i < e; ++i) cb[i] = (cb[i] + ca[i]) % p;
        t->sum[static_cast<std::size_t>(a) * q + b] =
            static_cast<std::uint16_t>(field.code_of_coeffs(cb));
      }
    }
  }

  // Generator of a cyclic group of even order is a non-square; the smallest
  // non-square is the first code with odd discrete log.
  for (Code a = 1; a < q; ++a) {
    if (t->log[a] % 2 == 1) {
      t->nonsquare = a;
      break;
    }
  }
  return field;
}

Field Field::of_order(std::uint32_t q, std::uint32_t max_order) {
  if (q < 2) throw FieldError("field order must be at least 2");
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  std::uint32_t e = 0;
  std::uint32_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1) throw FieldError(std::to_string(q) + " is not a prime power");
  return create(p, e, max_order);
}

std::uint32_t Field::characteristic() const { return tables_->p; }
std::uint32_t Field::degree() const { return tables_->e; }
std::uint32_t Field::order() const { return tables_->q; }
std::span<const std::uint32_t> Field::modulus() const { return tables_->modulus; }

FieldElement Field::zero() const { return {*this, 0}; }
FieldElement Field::one() const { return {*this, tables_->one}; }

FieldElement Field::element(Code code) const {
  if (code >= tables_->q) throw FieldError("element code out of range");
  return {*this, code};
}

FieldElement Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  return {*this, code_of_coeffs(coeffs)};
}

FieldElement Field::from_integer(std::int64_t value) const { return {*this, code_of_integer(value)}; }

std::vector<FieldElement> Field::elements() const {
  std::vector<FieldElement> out;
  out.reserve(tables_->q);
  for (Code a = 0; a < tables_->q; ++a) out.emplace_back(*this, a);
  return out;
}

Field::Code Field::one_code() const { return tables_->one; }

Field::Code Field::code_of_integer(std::int64_t value) const {
  return mod_p(value, tables_->p) * tables_->weight[0];
}

std::vector<std::uint32_t> Field::coeffs(Code a) const {
  std::vector<std::uint32_t> out(tables_->e);
  for (std::uint32_t i = 0; i < tables_->e; ++i) out[i] = (a / tables_->weight[i]) % tables_->p;
  return out;
}

Field::Code Field::code_of_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > tables_->e) throw FieldError("too many coefficients for field degree");
  Code code = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] >= tables_->p) throw FieldError("coefficient not reduced modulo p");
    code += coeffs[i] * tables_->weight[i];
  }
  return code;
}

Field::Code Field::add(Code a, Code b) const {
  const auto& t = *tables_;
  if (t.e == 1) {
    const Code s = a + b;
    return s >= t.p ? s - t.p : s;
  }
  if (!t.sum.empty()) return t.sum[static_cast<std::size_t>(a) * t.q + b];
  Code out = 0;
  for (std::uint32_t i = 0; i < t.e; ++i) {
    const std::uint32_t w = t.weight[i];
    out += (((a / w) % t.p + (b / w) % t.p) % t.p) * w;
  }
  return out;
}

Field::Code Field::neg(Code a) const { return tables_->negation[a]; }

Field::Code Field::sub(Code a, Code b) const { return add(a, neg(b)); }

Field::Code Field::mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  const auto& t = *tables_;
  const std::uint32_t group = t.q - 1;
  std::uint32_t l = t.log[a] + t.log[b];
  if (l >= group) l -= group;
  return t.exp[l];
}

Field::Code Field::inv(Code a) const {
  if (a == 0) throw FieldError("zero has no inverse");
  const auto& t = *tables_;
  const std::uint32_t group = t.q - 1;
  return t.exp[(group - t.log[a]) % group];
}

Field::Code Field::pow(Code a, std::uint64_t exponent) const {
  if (exponent == 0) return tables_->one;
  if (a == 0) return 0;
  const auto& t = *tables_;
  const std::uint64_t group = t.q - 1;
  return t.exp[(static_cast<std::uint64_t>(t.log[a]) * (exponent % group)) % group];
}

int Field::character(Code a) const {
  if (a == 0) return 0;
  return tables_->log[a] % 2 == 0 ? 1 : -1;
}

std::optional<Field::Code> Field::sqrt(Code a) const {
  if (a == 0) throw FieldError("square_root of zero is not defined here");
  const auto root = tonelli_shanks(*this, a);
  if (!root) return std::nullopt;
  return std::min(*root, neg(*root));
}

Field::Code Field::smallest_nonsquare() const { return tables_->nonsquare; }

Field::Code Field::mul_schoolbook(Code a, Code b) const {
  const auto& t = *tables_;
  if (t.e == 1) return static_cast<Code>((static_cast<std::uint64_t>(a) * b) % t.p);
  const auto ca = coeffs(a);
  const auto cb = coeffs(b);
  Poly prod(2 * t.e - 1, 0);
  for (std::uint32_t i = 0; i < t.e; ++i) {
    for (std::uint32_t j = 0; j < t.e; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % t.p);
    }
  }
  Poly r = poly_rem(std::move(prod), t.modulus, t.p);
  r.resize(t.e, 0);
  return code_of_coeffs(r);
}

std::string Field::format(Code a) const {
  if (tables_->e == 1) return std::to_string(a);
  std::string out;
  const auto c = coeffs(a);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

Field::Code Field::parse(const std::string& text) const {
  std::vector<std::uint32_t> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw FieldError("bad coefficient '" + item + "'");
      c.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw FieldError("bad field element '" + text + "'");
    }
  }
  if (c.empty()) throw FieldError("empty field element");
  if (tables_->e == 1) {
    if (c.size() != 1) throw FieldError("prime field elements take one integer");
    return code_of_integer(c[0]);
  }
  if (c.size() != tables_->e) {
    throw FieldError("expected " + std::to_string(tables_->e) + " coefficients in '" + text + "'");
  }
  return code_of_coeffs(c);
}

bool Field::operator==(const Field& other) const {
  return tables_ == other.tables_ || (tables_->p == other.tables_->p && tables_->e == other.tables_->e);
}

FieldElement::FieldElement(Field field, Field::Code code) : field_(std::move(field)), code_(code) {}

void FieldElement::require_same_field(const FieldElement& rhs) const {
  if (!(field_ == rhs.field_)) throw FieldError("mixing elements of different fields");
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  require_same_field(rhs);
  return {field_, field_.add(code_, rhs.code_)};
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  require_same_field(rhs);
  return {field_, field_.sub(code_, rhs.code_)};
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  require_same_field(rhs);
  return {field_, field_.mul(code_, rhs.code_)};
}

FieldElement FieldElement::operator/(const FieldElement& rhs) const {
  require_same_field(rhs);
  return {field_, field_.mul(code_, field_.inv(rhs.code_))};
}

FieldElement FieldElement::operator-() const { return {field_, field_.neg(code_)}; }
FieldElement FieldElement::inverse() const { return {field_, field_.inv(code_)}; }
FieldElement FieldElement::pow(std::uint64_t exponent) const { return {field_, field_.pow(code_, exponent)}; }

bool FieldElement::operator==(const FieldElement& rhs) const {
  return code_ == rhs.code_ && field_ == rhs.field_;
}

int quadratic_character(const FieldElement& a) { return a.field().character(a.code()); }

std::optional<FieldElement> square_root(const FieldElement& a) {
  const auto r = a.field().sqrt(a.code());
  if (!r) return std::nullopt;
  return FieldElement(a.field(), *r);
}

FieldElement smallest_nonsquare(const Field& field) { return field.element(field.smallest_nonsquare()); }

std::optional<Field::Code> tonelli_shanks(const Field& field, Field::Code a) {
  if (a == 0) return Field::Code{0};
  const Field::Code one = field.one_code();
  std::uint64_t odd = field.order() - 1;
  std::uint32_t twos = 0;
  while (odd % 2 == 0) {
    odd /= 2;
    ++twos;
  }
  // Euler's criterion via repeated squaring, independent of the log parity.
  if (field.pow(a, (static_cast<std::uint64_t>(field.order()) - 1) / 2) != one) return std::nullopt;

  Field::Code c = field.pow(field.smallest_nonsquare(), odd);
  Field::Code x = field.pow(a, (odd + 1) / 2);
  Field::Code b = field.pow(a, odd);
  std::uint32_t m = twos;
  while (b != one) {
    std::uint32_t i = 0;
    Field::Code probe = b;
    while (probe != one) {
      probe = field.mul(probe, probe);
      ++i;
    }
    Field::Code g = c;
    for (std::uint32_t j = 0; j + 1 < m - i; ++j) g = field.mul(g, g);
    x = field.mul(x, g);
    c = field.mul(g, g);
    b = field.mul(b, c);
    m = i;
  }
  return x;
}

Field::Code sqrt_three_mod_four(const Field& field, Field::Code a) {
  if (field.order() % 4 != 3) throw FieldError("fast square root needs q = 3 (mod 4)");
  return field.pow(a, (static_cast<std::uint64_t>(field.order()) + 1) / 4);
}

}  // namespace orthograph
