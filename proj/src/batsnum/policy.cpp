#include "batsnum/policy.hpp"

#include <cmath>
#include <string>

#include "batsnum/errors.hpp"

namespace batsnum {

RecodingPolicy RecodingPolicy::nonadaptive(int m) {
  if (m < 0) throw ParameterError("recoding number must be nonnegative");
  return RecodingPolicy(std::variant<int, Matrix>(m));
}

RecodingPolicy RecodingPolicy::adaptive(Matrix p) {
  if (p.rows() < 1 || p.cols() < 1) throw ParameterError("empty policy matrix");
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < p.cols(); ++m) {
      const double v = p(r, m);
      if (!std::isfinite(v) || v < -1e-12)
        throw ParameterError("policy row " + std::to_string(r) + " has a negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ParameterError("policy row " + std::to_string(r) + " sums to " + std::to_string(sum));
  }
  return RecodingPolicy(std::variant<int, Matrix>(std::move(p)));
}

double RecodingPolicy::prob(int m, int r) const {
  if (is_nonadaptive()) return m == this->m() ? 1.0 : 0.0;
  const Matrix& mat = p();
  if (r < 0 || r >= mat.rows() || m < 0 || m >= mat.cols()) return 0.0;
  return mat(r, m);
}

bool RecodingPolicy::idle_at_rank_zero() const {
  if (is_nonadaptive()) return m() == 0;
  return std::abs(p()(0, 0) - 1.0) <= 1e-12;
}

int RecodingPolicy::max_support() const {
  if (is_nonadaptive()) return m();
  const Matrix& mat = p();
  for (Eigen::Index m = mat.cols() - 1; m > 0; --m)
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
      if (mat(r, m) > 0.0) return static_cast<int>(m);
  return 0;
}

Matrix RecodingPolicy::dense(int M, int cols) const {
  Matrix out = Matrix::Zero(M + 1, cols);
  if (is_nonadaptive()) {
    if (m() >= cols) throw ParameterError("policy support exceeds matrix width");
    out.col(m()).setOnes();
    return out;
  }
  const Matrix& mat = p();
  if (mat.rows() != M + 1) throw ParameterError("policy has wrong number of ranks");
  if (max_support() >= cols) throw ParameterError("policy support exceeds matrix width");
  const Eigen::Index c = std::min<Eigen::Index>(cols, mat.cols());
  out.leftCols(c) = mat.leftCols(c);
  return out;
}

}  // namespace batsnum
