#include "freebrown/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& entries) {
  ComplexMatrix m(static_cast<int>(entries.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return m;
}

ComplexMatrix ComplexMatrix::scaled_identity(int dim, cplx value) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = value;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+=");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-=");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += std::abs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& v : a_) best = std::max(best, std::abs(v));
  return best;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const int n = lhs.dim();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const cplx aik = lhs(i, k);
      if (aik == cplx(0.0)) continue;
      for (int j = 0; j < n; ++j) r(i, j) += aik * rhs(k, j);
    }
  }
  return r;
}

void LuInverter::invert(const ComplexMatrix& src, ComplexMatrix& dst) {
  const int n = src.dim();
  const double threshold = 1e-14 * std::max(src.inf_norm(), 1e-300);

  if (n == 1) {
    if (std::abs(src(0, 0)) <= threshold)
      throw SingularMatrix("1x1 inversion: pivot underflow");
    dst = ComplexMatrix(1);
    dst(0, 0) = 1.0 / src(0, 0);
    return;
  }
  if (n == 2) {
    const cplx det = src(0, 0) * src(1, 1) - src(0, 1) * src(1, 0);
    // same semantics as partial-pivot LU: second pivot is |det| / |first pivot|
    const double pivot1 = std::max(std::abs(src(0, 0)), std::abs(src(1, 0)));
    if (pivot1 <= threshold || std::abs(det) <= threshold * pivot1)
      throw SingularMatrix("2x2 inversion: pivot underflow");
    dst = ComplexMatrix(2);
    const cplx inv_det = 1.0 / det;
    dst(0, 0) = src(1, 1) * inv_det;
    dst(0, 1) = -src(0, 1) * inv_det;
    dst(1, 0) = -src(1, 0) * inv_det;
    dst(1, 1) = src(0, 0) * inv_det;
    return;
  }

  lu_.assign(src.data(), src.data() + static_cast<std::size_t>(n) * n);
  piv_.resize(static_cast<std::size_t>(n));
  auto at = [&](int i, int j) -> cplx& { return lu_[static_cast<std::size_t>(i) * n + j]; };

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best <= threshold) {
      throw SingularMatrix("LU pivot " + std::to_string(k) + " underflow (" +
                           std::to_string(best) + ")");
    }
    piv_[static_cast<std::size_t>(k)] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
    }
    const cplx pivot_inv = 1.0 / at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cplx m = at(i, k) * pivot_inv;
      at(i, k) = m;
      if (m == cplx(0.0)) continue;
      for (int j = k + 1; j < n; ++j) at(i, j) -= m * at(k, j);
    }
  }

  dst = ComplexMatrix(n);
  col_.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) col_[static_cast<std::size_t>(i)] = (i == c) ? 1.0 : 0.0;
    // apply row swaps, then forward/back substitution
    for (int k = 0; k < n; ++k) {
      const int p = piv_[static_cast<std::size_t>(k)];
      if (p != k) std::swap(col_[static_cast<std::size_t>(k)], col_[static_cast<std::size_t>(p)]);
    }
    for (int i = 1; i < n; ++i) {
      cplx s = col_[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) s -= at(i, j) * col_[static_cast<std::size_t>(j)];
      col_[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      cplx s = col_[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) s -= at(i, j) * col_[static_cast<std::size_t>(j)];
      col_[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    for (int i = 0; i < n; ++i) dst(i, c) = col_[static_cast<std::size_t>(i)];
  }
}

ComplexMatrix invert(const ComplexMatrix& m) {
  LuInverter work;
  ComplexMatrix r;
  work.invert(m, r);
  return r;
}

ComplexMatrix imag_part(const ComplexMatrix& m) {
  const int n = m.dim();
  ComplexMatrix r(n);
  const cplx half_over_i(0.0, -0.5);  // 1/(2i)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = half_over_i * (m(i, j) - std::conj(m(j, i)));
  return r;
}

ComplexMatrix real_part(const ComplexMatrix& m) {
  const int n = m.dim();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return r;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double herm_tol) {
  const int n = m.dim();
  const double scale = std::max(m.max_abs(), 1.0);
  if (!m.is_hermitian(herm_tol * scale)) {
    throw NotHermitian("hermitian_eigenvalues: input is not hermitian within tolerance");
  }

  if (n == 1) return {m(0, 0).real()};
  if (n == 2) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double b2 = std::norm(m(0, 1));
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b2);
    return {mean - disc, mean + disc};
  }

  // cyclic Jacobi, eigenvalues only
  ComplexMatrix w = m;
  const int max_sweeps = 60;
  const double stop = 1e-14 * std::max(w.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(w(p, q));
    if (std::sqrt(2.0 * off) < stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = w(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq < 1e-300) continue;
        const double app = w(p, p).real();
        const double aqq = w(q, q).real();
        const cplx phase = apq / abs_apq;
        const double tau = (aqq - app) / (2.0 * abs_apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cplx s = t * c * phase;
        // right-multiply by J and left-multiply by J^dagger where
        // J[p][p]=c, J[p][q]=s, J[q][p]=-conj(s), J[q][q]=c
        for (int i = 0; i < n; ++i) {
          const cplx wip = w(i, p);
          const cplx wiq = w(i, q);
          w(i, p) = c * wip - std::conj(s) * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (int j = 0; j < n; ++j) {
          const cplx wpj = w(p, j);
          const cplx wqj = w(q, j);
          w(p, j) = c * wpj - s * wqj;
          w(q, j) = std::conj(s) * wpj + c * wqj;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        w(p, p) = cplx(w(p, p).real(), 0.0);
        w(q, q) = cplx(w(q, q).real(), 0.0);
      }
    }
  }

  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = w(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double min_eig_hermitian(const ComplexMatrix& m, double herm_tol) {
  return hermitian_eigenvalues(m, herm_tol).front();
}

}  // namespace freebrown
