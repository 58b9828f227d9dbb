#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "orthograph/field.hpp"

namespace orthograph {

/// Dense row-major matrix over GF(q), entries stored as element codes.
class FieldMatrix {
 public:
  FieldMatrix(Field field, std::size_t rows, std::size_t cols);
  static FieldMatrix identity(Field field, std::size_t n);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Field::Code operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Field::Code& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::vector<Field::Code> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Field::Code> values);

  FieldMatrix transpose() const;
  FieldMatrix operator*(const FieldMatrix& rhs) const;
  std::vector<Field::Code> apply(std::span<const Field::Code> x) const;

  bool operator==(const FieldMatrix& rhs) const;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Field::Code> data_;
};

/// Reduced row echelon form; returns the pivot columns.
std::vector<std::size_t> row_reduce(FieldMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column of the reduced form,
/// ordered by free column. Each basis vector has a one at its free column.
std::vector<std::vector<Field::Code>> nullspace(FieldMatrix m);

std::size_t rank(FieldMatrix m);

/// One row per line, entries separated by spaces (Field::format per entry).
std::string format_matrix(const FieldMatrix& m);

}  // namespace orthograph
