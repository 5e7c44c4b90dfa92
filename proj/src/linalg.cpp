#include "pqkd/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pqkd {

double HermMatrix::hermiticity_error() const {
  double err = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      err = std::max(err, std::abs(at(r, c) - std::conj(at(c, r))));
  return err;
}

HermMatrix HermMatrix::operator-(const HermMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("HermMatrix: dimension mismatch");
  HermMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

HermMatrix HermMatrix::operator+(const HermMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("HermMatrix: dimension mismatch");
  HermMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

HermMatrix& HermMatrix::operator*=(double s) {
  for (auto& v : a_) v *= s;
  return *this;
}

std::vector<double> hermitian_eigenvalues(const HermMatrix& input) {
  if (input.hermiticity_error() > 1e-9)
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  const int n = input.dim();
  HermMatrix a(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a.at(r, c) = 0.5 * (input.at(r, c) + std::conj(input.at(c, r)));

  double norm = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) norm = std::max(norm, std::abs(a.at(r, c)));
  const double tol = std::max(norm, 1.0) * 1e-15;

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
    if (off <= tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a.at(p, q);
        const double mag = std::abs(apq);
        if (mag <= tol) continue;
        // unitary 2x2 rotation G = [[c, s e^{i phase}], [-s e^{-i phase}, c]]
        // chosen so (G^dagger A G)_{pq} = 0
        const cplx phase = apq / mag;
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const cplx akp = a.at(k, p);
          const cplx akq = a.at(k, q);
          a.at(k, p) = c * akp - s * std::conj(phase) * akq;
          a.at(k, q) = s * phase * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a.at(p, k);
          const cplx aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * phase * aqk;
          a.at(q, k) = s * std::conj(phase) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a.at(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace pqkd
