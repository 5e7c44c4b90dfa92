#include "pqkd/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace pqkd {

namespace {

constexpr double kTol = 1e-9;

enum class Step { improved, optimal, unbounded };

struct Tableau {
  int cols = 0;                        // structural + slack + artificial
  std::vector<std::vector<double>> a;  // one row per constraint, rhs last
  std::vector<double> z;               // reduced costs, minus objective last
  std::vector<int> basis;

  void pivot(int r, int c) {
    auto& row = a[static_cast<size_t>(r)];
    const double p = row[static_cast<size_t>(c)];
    for (double& v : row) v /= p;
    for (size_t i = 0; i < a.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      auto& other = a[i];
      const double f = other[static_cast<size_t>(c)];
      if (f == 0.0) continue;
      for (size_t j = 0; j < other.size(); ++j) other[j] -= f * row[j];
    }
    const double f = z[static_cast<size_t>(c)];
    if (f != 0.0)
      for (size_t j = 0; j < z.size(); ++j) z[j] -= f * row[j];
    basis[static_cast<size_t>(r)] = c;
  }

  // One Bland step: smallest improving column enters, smallest basis index
  // among the ratio-test ties leaves.
  Step step(int allowed_cols) {
    int enter = -1;
    for (int j = 0; j < allowed_cols; ++j) {
      if (z[static_cast<size_t>(j)] < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Step::optimal;
    int leave = -1;
    double best = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double coef = a[i][static_cast<size_t>(enter)];
      if (coef <= kTol) continue;
      const double ratio = a[i].back() / coef;
      if (leave < 0 || ratio < best - kTol ||
          (ratio < best + kTol && basis[i] < basis[static_cast<size_t>(leave)])) {
        leave = static_cast<int>(i);
        best = ratio;
      }
    }
    if (leave < 0) return Step::unbounded;
    pivot(leave, enter);
    return Step::improved;
  }
};

}  // namespace

LpResult solve_lp(const std::vector<double>& c, const std::vector<LpRow>& rows) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  for (const auto& row : rows)
    if (static_cast<int>(row.coeff.size()) != n)
      throw std::invalid_argument("solve_lp: row width does not match objective");

  // Columns: n structural, one slack or surplus per inequality, one
  // artificial per row whose canonical form (nonnegative rhs) is not a plain
  // <= row. Slack columns of <= rows seed the basis.
  int num_slack = 0;
  for (const auto& row : rows)
    if (row.rel != LpRel::eq) ++num_slack;

  std::vector<int> art_of_row(static_cast<size_t>(m), -1);
  int num_art = 0;
  for (int i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    LpRel rel = row.rel;
    if (row.rhs < 0.0 && rel != LpRel::eq) rel = rel == LpRel::le ? LpRel::ge : LpRel::le;
    if (rel != LpRel::le) art_of_row[static_cast<size_t>(i)] = num_art++;
  }

  Tableau t;
  t.cols = n + num_slack + num_art;
  t.a.assign(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(t.cols) + 1, 0.0));
  t.basis.assign(static_cast<size_t>(m), -1);

  int slack = 0;
  for (int i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    auto& out = t.a[static_cast<size_t>(i)];
    const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(j)] = sign * row.coeff[static_cast<size_t>(j)];
    out.back() = sign * row.rhs;
    if (row.rel != LpRel::eq) {
      LpRel rel = row.rel;
      if (sign < 0.0) rel = rel == LpRel::le ? LpRel::ge : LpRel::le;
      out[static_cast<size_t>(n + slack)] = rel == LpRel::le ? 1.0 : -1.0;
      if (rel == LpRel::le) t.basis[static_cast<size_t>(i)] = n + slack;
      ++slack;
    }
    const int art = art_of_row[static_cast<size_t>(i)];
    if (art >= 0) {
      out[static_cast<size_t>(n + num_slack + art)] = 1.0;
      t.basis[static_cast<size_t>(i)] = n + num_slack + art;
    }
  }

  LpResult result;
  if (num_art > 0) {
    // Phase 1: minimize the artificial total, starting from reduced costs
    // with the basic artificial columns eliminated.
    t.z.assign(static_cast<size_t>(t.cols) + 1, 0.0);
    for (int j = 0; j < num_art; ++j) t.z[static_cast<size_t>(n + num_slack + j)] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (art_of_row[static_cast<size_t>(i)] < 0) continue;
      const auto& row = t.a[static_cast<size_t>(i)];
      for (size_t j = 0; j < t.z.size(); ++j) t.z[j] -= row[j];
    }
    while (t.step(t.cols) == Step::improved) {
    }
    if (-t.z.back() > kTol) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Pivot leftover artificials out of the basis; a row whose structural
    // and slack part vanished is redundant and is dropped.
    for (int i = static_cast<int>(t.a.size()) - 1; i >= 0; --i) {
      if (t.basis[static_cast<size_t>(i)] < n + num_slack) continue;
      int col = -1;
      for (int j = 0; j < n + num_slack; ++j) {
        if (std::abs(t.a[static_cast<size_t>(i)][static_cast<size_t>(j)]) > kTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        t.pivot(i, col);
      } else {
        t.a.erase(t.a.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }

  // Phase 2 on the original objective, artificial columns barred.
  t.z.assign(static_cast<size_t>(t.cols) + 1, 0.0);
  for (int j = 0; j < n; ++j) t.z[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
  for (size_t i = 0; i < t.a.size(); ++i) {
    const int b = t.basis[i];
    if (b < n && c[static_cast<size_t>(b)] != 0.0) {
      const double f = c[static_cast<size_t>(b)];
      for (size_t j = 0; j < t.z.size(); ++j) t.z[j] -= f * t.a[i][j];
    }
  }
  int guard = 0;
  Step s;
  while ((s = t.step(n + num_slack)) == Step::improved) {
    if (++guard > 100000) throw std::runtime_error("solve_lp: iteration limit");
  }
  if (s == Step::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }

  result.status = LpStatus::optimal;
  result.objective = -t.z.back();
  result.x.assign(static_cast<size_t>(n), 0.0);
  for (size_t i = 0; i < t.a.size(); ++i)
    if (t.basis[i] < n) result.x[static_cast<size_t>(t.basis[i])] = t.a[i].back();
  return result;
}

}  // namespace pqkd
