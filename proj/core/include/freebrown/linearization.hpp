#pragma once

#include <map>
#include <vector>

#include "freebrown/complex_matrix.hpp"
#include "freebrown/ncpoly.hpp"

namespace freebrown {

/// Selfadjoint affine matrix pencil
///
///   L = constant + sum_j (E_j x_j + E_j^† x_j^*)
///
/// whose top-left 2x2 corner of (b (x) e_11 - L)^{-1} recovers the resolvent
/// of the hermitized polynomial.  Built by linearize_monomial /
/// linearize_polynomial below.
struct Linearization {
  int dim = 0;
  ComplexMatrix constant;                  // hermitian
  std::map<int, ComplexMatrix> var_coeffs; // variable index j -> E_j

  /// Pencil evaluated at matrix substitutions (subst[j-1] stands in for x_j;
  /// adjoints substitute the matrix adjoint).  Result has dim * n rows where
  /// n is the common substitution size.
  ComplexMatrix evaluate(const std::vector<ComplexMatrix>& subst) const;
};

/// Pencil of the monomial coeff * x_{w_1} ... x_{w_k}:
/// dim 2 for k = 1, dim 4k-2 otherwise, built from the 2x2 blocks
/// Y_l = [[x_l, 0], [0, 1]] on the antidiagonal with -1 blocks underneath
/// and the coefficient merged into the innermost block.
Linearization linearize_monomial(cplx coeff, const Word& word);

/// Block-diagonal stacking of the monomial pencils with shared corner;
/// degree-1 monomials and constants contribute to the corner block directly.
Linearization linearize_polynomial(const NCPolynomial& p);

/// One variable's slice of a pencil.
struct VarTerm {
  int variable = 0;          // 0 tags the constant-only slice
  ComplexMatrix coeff;       // E_j
  ComplexMatrix constant;    // full pencil constant on the first slice, zero elsewhere
};

/// Splits L into per-variable summands E_j x_j + E_j^† x_j^*, with the full
/// hermitian constant attached to the first one.  The summands add back to L.
std::vector<VarTerm> split_by_variable(const Linearization& l);

/// P evaluated at matrix substitutions (all matrices square, same size).
ComplexMatrix evaluate_poly(const NCPolynomial& p, const std::vector<ComplexMatrix>& subst);

}  // namespace freebrown
