#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "batsnum/rng.hpp"

namespace batsnum {

enum class Field : int { gf2 = 2, gf256 = 256 };

using Element = std::uint8_t;

inline int field_size(Field f) { return static_cast<int>(f); }

// Addition in characteristic 2 is XOR for both fields.
inline Element gf_add(Element a, Element b) { return a ^ b; }

// GF(2^8) product reduced by x^8+x^4+x^3+x+1 (0x11B); table driven.
Element gf_mul(Element a, Element b);
Element gf_mul(Field f, Element a, Element b);
// Multiplicative inverse; a must be nonzero.
Element gf_inv(Field f, Element a);
// Bitwise shift-and-reduce multiplication, used to cross-check the tables.
Element gf256_mul_slow(Element a, Element b);

// Row-major dense matrix over GF(2) or GF(256). GF(2) entries are stored as
// 0/1 bytes.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Element& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  static FieldMatrix identity(Field f, std::size_t n);

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  Field field_ = Field::gf256;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

std::size_t matrix_rank(const FieldMatrix& a);
FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix transpose(const FieldMatrix& a);
FieldMatrix random_matrix(Field f, std::size_t rows, std::size_t cols, Rng& rng);
FieldMatrix random_matrix(Field f, std::size_t rows, std::size_t cols,
                          std::uint64_t seed);

// dst += c * src over the field (vector axpy).
void axpy(Field f, std::span<Element> dst, Element c, std::span<const Element> src);

// Incrementally maintained row space of coefficient vectors. Keeps the
// innovative vectors as received (for systematic forwarding) and a reduced
// echelon copy for O(n*rank) membership tests.
class RowSpace {
 public:
  RowSpace(Field f, std::size_t dim) : field_(f), dim_(dim) {}

  // Returns true when v is linearly independent of the stored vectors.
  bool insert(std::span<const Element> v);
  bool contains(std::span<const Element> v) const;

  std::size_t rank() const { return originals_.size(); }
  std::size_t dim() const { return dim_; }
  Field field() const { return field_; }
  const std::vector<std::vector<Element>>& innovative() const { return originals_; }

  // Uniformly random element of the row space.
  std::vector<Element> random_combination(Rng& rng) const;

 private:
  // Reduces v against the echelon basis in place; returns the pivot column of
  // the remainder or dim_ when it vanished.
  std::size_t reduce(std::vector<Element>& v) const;

  Field field_;
  std::size_t dim_;
  std::vector<std::vector<Element>> originals_;
  std::vector<std::vector<Element>> echelon_;  // each row has pivot 1
  std::vector<std::size_t> pivots_;
};

}  // namespace batsnum
