#pragma once

#include <complex>
#include <vector>

namespace freebrown {

using cplx = std::complex<double>;

/// Small dense complex square matrix, row-major storage.
///
/// This is the universal currency of all operator-valued transforms in the
/// library.  Sizes stay tiny (2 up to a few dozen for linearized pencils),
/// so everything below favors determinism and simplicity over blocking.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(const std::vector<cplx>& entries);
  /// dim x dim matrix filled with the same diagonal value.
  static ComplexMatrix scaled_identity(int dim, cplx value);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  const cplx& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * dim_ + j];
  }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  ComplexMatrix adjoint() const;
  cplx trace() const;

  double frobenius_norm() const;
  /// Induced infinity norm (max absolute row sum).
  double inf_norm() const;
  double max_abs() const;

  bool is_hermitian(double tol = 1e-12) const;

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) {
    m *= s;
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// m^{-1} by partial-pivot LU.  Throws SingularMatrix when a pivot falls
/// below 1e-14 * inf_norm(m).
ComplexMatrix invert(const ComplexMatrix& m);

/// (m - m^†) / 2i.  Always hermitian.
ComplexMatrix imag_part(const ComplexMatrix& m);

/// (m + m^†) / 2.
ComplexMatrix real_part(const ComplexMatrix& m);

/// All eigenvalues of a hermitian matrix, ascending, by cyclic Jacobi.
/// Throws NotHermitian when the input fails the hermitian check.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol = 1e-8);

/// Smallest eigenvalue of a hermitian matrix.
double min_eig_hermitian(const ComplexMatrix& m, double herm_tol = 1e-8);

/// Reusable LU workspace so the quadrature hot loops do not reallocate.
class LuInverter {
 public:
  /// Writes src^{-1} into dst (dst is resized as needed).
  void invert(const ComplexMatrix& src, ComplexMatrix& dst);

 private:
  std::vector<cplx> lu_;
  std::vector<int> piv_;
  std::vector<cplx> col_;
};

}  // namespace freebrown
