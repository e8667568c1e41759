#pragma once

#include <variant>

#include "batsnum/linalg.hpp"

namespace batsnum {

// Recoding policy p(m|r). Nonadaptive policies send the same m for every
// rank; adaptive ones carry an (M+1) x (M0+1) row-stochastic matrix.
class RecodingPolicy {
 public:
  RecodingPolicy() : data_(0) {}

  static RecodingPolicy nonadaptive(int m);
  // Throws ParameterError unless rows are stochastic. The optimizers keep
  // p(0|0) = 1; hand-built policies may not (see idle_at_rank_zero).
  static RecodingPolicy adaptive(Matrix p);

  bool is_nonadaptive() const { return std::holds_alternative<int>(data_); }
  int m() const { return std::get<int>(data_); }
  const Matrix& p() const { return std::get<Matrix>(data_); }

  // p(m|r); for nonadaptive the indicator of m == this->m().
  double prob(int m, int r) const;
  // p(0|0) == 1.
  bool idle_at_rank_zero() const;
  // Largest transmit count with positive probability.
  int max_support() const;
  // Dense (M+1) x (cols) form.
  Matrix dense(int M, int cols) const;

  friend bool operator==(const RecodingPolicy& a, const RecodingPolicy& b) {
    if (a.is_nonadaptive() != b.is_nonadaptive()) return false;
    if (a.is_nonadaptive()) return a.m() == b.m();
    return a.p().rows() == b.p().rows() && a.p().cols() == b.p().cols() && a.p() == b.p();
  }

 private:
  explicit RecodingPolicy(std::variant<int, Matrix> d) : data_(std::move(d)) {}
  std::variant<int, Matrix> data_;
};

}  // namespace batsnum
