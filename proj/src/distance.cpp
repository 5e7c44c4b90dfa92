#include "pqkd/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace pqkd {

double trace_distance(const HermMatrix& a, const HermMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  const HermMatrix diff = a - b;
  double sum = 0.0;
  for (double lambda : hermitian_eigenvalues(diff)) sum += std::abs(lambda);
  return 0.5 * sum;
}

int pair_index(Window j, Window k) {
  for (int i = 0; i < 3; ++i) {
    const auto& [a, b] = kWindowPairs[static_cast<size_t>(i)];
    if ((a == j && b == k) || (a == k && b == j)) return i;
  }
  throw std::invalid_argument("pair_index: windows must differ");
}

BiasBounds bias_tables_from_moments(const std::array<FockMoments, 3>& moments, double delta_phi,
                                    int n_cut, Basis basis) {
  if (n_cut < 0) throw std::invalid_argument("bias_tables: n_cut must be nonnegative");
  for (const auto& mom : moments)
    if (mom.n_cut < n_cut) throw std::invalid_argument("bias_tables: moment table too short");
  BiasBounds table;
  table.n_cut = n_cut;
  for (auto& v : table.delta) v.assign(static_cast<size_t>(n_cut) + 1, 0.0);
  for (auto& v : table.deltat) v.assign(static_cast<size_t>(n_cut) + 1, 0.0);

  const auto labels = basis_x_labels(basis);
  for (int n = 0; n <= n_cut; ++n) {
    std::array<HermMatrix, 3> fixed{HermMatrix(n + 1), HermMatrix(n + 1), HermMatrix(n + 1)};
    std::array<HermMatrix, 3> averaged{HermMatrix(n + 1), HermMatrix(n + 1), HermMatrix(n + 1)};
    for (size_t w = 0; w < 3; ++w) {
      fixed[w] = fock_from_moments(moments[w], delta_phi, n, labels[0]);
      HermMatrix avg = fixed[w] + fock_from_moments(moments[w], delta_phi, n, labels[1]);
      avg *= 0.5;
      averaged[w] = avg;
    }
    for (size_t i = 0; i < 3; ++i) {
      const auto& [wj, wk] = kWindowPairs[i];
      const auto j = static_cast<size_t>(static_cast<int>(wj));
      const auto k = static_cast<size_t>(static_cast<int>(wk));
      table.delta[i][static_cast<size_t>(n)] = trace_distance(averaged[j], averaged[k]);
      table.deltat[i][static_cast<size_t>(n)] = trace_distance(fixed[j], fixed[k]);
    }
  }
  return table;
}

BiasBounds bias_tables(const TransmitterParams& params, int n_cut, const QuadSpec& quad,
                       Basis basis) {
  std::array<FockMoments, 3> moments;
  for (size_t w = 0; w < 3; ++w) moments[w] = fock_moments(params, kWindows[w], n_cut, quad);
  return bias_tables_from_moments(moments, params.delta_phi, n_cut, basis);
}

}  // namespace pqkd
