// Dense complex Hermitian matrices of small fixed dimension and a cyclic
// Jacobi eigensolver. Dimensions in this project never exceed n_cut + 1
// (5 at the supported maximum), so an O(n^3)-per-sweep method is ideal.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace pqkd {

using cplx = std::complex<double>;

// Row-major dense complex matrix; Hermitian by construction where used.
class HermMatrix {
 public:
  HermMatrix() = default;
  explicit HermMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    if (dim < 1 || dim > 16) throw std::invalid_argument("HermMatrix: bad dimension");
  }

  int dim() const { return dim_; }
  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

  // Largest absolute deviation from A = A^dagger.
  double hermiticity_error() const;

  HermMatrix operator-(const HermMatrix& o) const;
  HermMatrix operator+(const HermMatrix& o) const;
  HermMatrix& operator*=(double s);

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi rotations.
// The input is symmetrized internally; off-Hermitian parts above 1e-9 are an
// error.
std::vector<double> hermitian_eigenvalues(const HermMatrix& a);

}  // namespace pqkd
