// Dense two-phase simplex for the small photon-number estimation programs
// (tens of rows, at most 16 variables). Bland's rule keeps it cycle-free;
// no scaling or sparsity is needed at this size.
#pragma once

#include <vector>

namespace pqkd {

enum class LpRel { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded };

struct LpRow {
  std::vector<double> coeff;
  LpRel rel = LpRel::le;
  double rhs = 0.0;
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Minimizes c . x subject to the rows and x >= 0. Upper bounds on variables
// must be supplied as explicit rows. Feasibility tolerance 1e-9.
LpResult solve_lp(const std::vector<double>& c, const std::vector<LpRow>& rows);

}  // namespace pqkd
