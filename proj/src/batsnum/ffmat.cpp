#include "batsnum/ffmat.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace batsnum {

namespace {

struct Gf256Tables {
  std::array<Element, 256 * 256> mul{};
  std::array<Element, 256> inv{};

  Gf256Tables() {
    // 0x03 generates the multiplicative group mod 0x11B (0x02 does not).
    std::array<Element, 512> exp{};
    std::array<int, 256> log{};
    Element x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = x;
      log[x] = i;
      x = gf256_mul_slow(x, 0x03);
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    for (int a = 1; a < 256; ++a) {
      for (int b = 1; b < 256; ++b) mul[a * 256 + b] = exp[log[a] + log[b]];
      inv[a] = exp[(255 - log[a]) % 255];
    }
  }
};

const Gf256Tables& tables() {
  static const Gf256Tables t;
  return t;
}

}  // namespace

Element gf256_mul_slow(Element a, Element b) {
  unsigned acc = 0;
  unsigned aa = a;
  for (unsigned bb = b; bb != 0; bb >>= 1) {
    if (bb & 1) acc ^= aa;
    aa <<= 1;
    if (aa & 0x100) aa ^= 0x11B;
  }
  return static_cast<Element>(acc);
}

Element gf_mul(Element a, Element b) { return tables().mul[a * 256 + b]; }

Element gf_mul(Field f, Element a, Element b) {
  if (f == Field::gf2) return a & b & 1;
  return gf_mul(a, b);
}

Element gf_inv(Field f, Element a) {
  if (a == 0) throw std::domain_error("gf_inv: zero has no inverse");
  if (f == Field::gf2) return 1;
  return tables().inv[a];
}

void axpy(Field f, std::span<Element> dst, Element c, std::span<const Element> src) {
  if (c == 0) return;
  if (f == Field::gf2) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const Element* row = tables().mul.data() + c * 256;
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= row[src[i]];
}

FieldMatrix FieldMatrix::identity(Field f, std::size_t n) {
  FieldMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::size_t matrix_rank(const FieldMatrix& a) {
  FieldMatrix m = a;
  const Field f = m.field();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m.at(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m.at(pivot, k), m.at(rank, k));
    }
    const Element inv = gf_inv(f, m.at(rank, c));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      const Element factor = gf_mul(f, m.at(r, c), inv);
      if (factor != 0) axpy(f, m.row(r), factor, m.row(rank));
    }
    ++rank;
  }
  return rank;
}

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows() || a.field() != b.field())
    throw std::invalid_argument("multiply: shape or field mismatch");
  FieldMatrix out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      axpy(a.field(), out.row(i), a.at(i, k), b.row(k));
  return out;
}

FieldMatrix transpose(const FieldMatrix& a) {
  FieldMatrix t(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  return t;
}

FieldMatrix random_matrix(Field f, std::size_t rows, std::size_t cols, Rng& rng) {
  FieldMatrix m(f, rows, cols);
  const unsigned mask = f == Field::gf2 ? 1u : 0xFFu;
  std::uint64_t bits = 0;
  int left = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (left == 0) {
        bits = rng();
        left = 8;
      }
      m.at(i, j) = static_cast<Element>(bits & mask);
      bits >>= 8;
      --left;
    }
  }
  return m;
}

FieldMatrix random_matrix(Field f, std::size_t rows, std::size_t cols,
                          std::uint64_t seed) {
  Rng rng(seed);
  return random_matrix(f, rows, cols, rng);
}

std::size_t RowSpace::reduce(std::vector<Element>& v) const {
  for (std::size_t b = 0; b < echelon_.size(); ++b) {
    const Element c = v[pivots_[b]];
    if (c != 0) axpy(field_, v, c, echelon_[b]);
  }
  for (std::size_t i = 0; i < dim_; ++i)
    if (v[i] != 0) return i;
  return dim_;
}

bool RowSpace::insert(std::span<const Element> v) {
  if (v.size() != dim_) throw std::invalid_argument("RowSpace: dimension mismatch");
  if (originals_.size() == dim_) return false;
  std::vector<Element> w(v.begin(), v.end());
  const std::size_t p = reduce(w);
  if (p == dim_) return false;
  const Element inv = gf_inv(field_, w[p]);
  for (auto& x : w) x = gf_mul(field_, x, inv);
  // Keep the basis fully reduced so reduce() is a single pass.
  for (auto& row : echelon_) {
    const Element c = row[p];
    if (c != 0) axpy(field_, row, c, w);
  }
  echelon_.push_back(std::move(w));
  pivots_.push_back(p);
  originals_.emplace_back(v.begin(), v.end());
  return true;
}

bool RowSpace::contains(std::span<const Element> v) const {
  std::vector<Element> w(v.begin(), v.end());
  return reduce(w) == dim_;
}

std::vector<Element> RowSpace::random_combination(Rng& rng) const {
  std::vector<Element> out(dim_, 0);
  const unsigned mask = field_ == Field::gf2 ? 1u : 0xFFu;
  for (const auto& row : echelon_) {
    const auto c = static_cast<Element>(rng() & mask);
    axpy(field_, out, c, row);
  }
  return out;
}

}  // namespace batsnum
