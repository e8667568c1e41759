#include "batsnum/simplex.hpp"

#include <limits>
#include <stdexcept>

namespace batsnum {

LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("simplex: b has wrong length");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("simplex: ragged A");
  for (double v : b)
    if (v < 0.0) throw std::invalid_argument("simplex: b must be nonnegative");

  const std::size_t width = n + m + 1;  // structural, slack, rhs
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = A[i][j];
    at(i, n + i) = 1.0;
    at(i, width - 1) = b[i];
  }
  // Objective row holds reduced costs z_j - c_j.
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  constexpr double tol = 1e-11;
  LpResult res;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (at(m, j) < -tol) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = at(i, enter);
      if (a > tol) {
        const double ratio = at(i, width - 1) / a;
        if (ratio < best - tol || (ratio <= best + tol && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) {
      res.status = LpResult::Status::unbounded;
      return res;
    }
    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
  }
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = at(i, width - 1);
  res.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.dual[i] = at(m, n + i);
  res.value = at(m, width - 1);
  return res;
}

}  // namespace batsnum
