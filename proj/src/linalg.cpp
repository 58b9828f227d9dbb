#include "orthograph/linalg.hpp"

#include <stdexcept>

namespace orthograph {

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix FieldMatrix::identity(Field field, std::size_t n) {
  const auto one = field.one_code();
  FieldMatrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

std::vector<Field::Code> FieldMatrix::column(std::size_t c) const {
  std::vector<Field::Code> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void FieldMatrix::set_column(std::size_t c, std::span<const Field::Code> values) {
  if (values.size() != rows_) throw std::invalid_argument("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

FieldMatrix FieldMatrix::transpose() const {
  FieldMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shapes do not match");
  FieldMatrix out(field_, rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      Field::Code acc = 0;
      for (std::size_t i = 0; i < cols_; ++i) acc = field_.add(acc, field_.mul((*this)(r, i), rhs(i, c)));
      out(r, c) = acc;
    }
  }
  return out;
}

std::vector<Field::Code> FieldMatrix::apply(std::span<const Field::Code> x) const {
  if (x.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<Field::Code> out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Field::Code acc = 0;
    for (std::size_t i = 0; i < cols_; ++i) acc = field_.add(acc, field_.mul((*this)(r, i), x[i]));
    out[r] = acc;
  }
  return out;
}

bool FieldMatrix::operator==(const FieldMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_ && field_ == rhs.field_;
}

std::vector<std::size_t> row_reduce(FieldMatrix& m) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    const Field::Code scale = f.inv(m(row, col));
    for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) = f.mul(m(row, c), scale);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Field::Code factor = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<Field::Code>> nullspace(FieldMatrix m) {
  const Field& f = m.field();
  const auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Field::Code>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Field::Code> v(m.cols(), 0);
    v[free] = f.one_code();
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(FieldMatrix m) { return row_reduce(m).size(); }

std::string format_matrix(const FieldMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += m.field().format(m(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace orthograph
