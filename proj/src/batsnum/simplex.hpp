#pragma once

#include <vector>

namespace batsnum {

// Dense primal simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0, so
// the slack basis is feasible from the start. Bland's rule rules out cycling;
// intended for the small scheduling LPs (tens to a few thousand rows).
struct LpResult {
  enum class Status { optimal, unbounded };
  Status status = Status::optimal;
  double value = 0.0;
  std::vector<double> x;     // primal solution
  std::vector<double> dual;  // shadow price of each row of A
};

LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b);

}  // namespace batsnum
