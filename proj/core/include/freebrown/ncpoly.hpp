#pragma once

#include <complex>
#include <string>
#include <vector>

namespace freebrown {

using cplx = std::complex<double>;

/// One noncommuting letter: variable x_j or its adjoint x_j^*.
struct Letter {
  int variable = 1;  // 1-based variable index
  bool starred = false;

  Letter adjoint() const { return {variable, !starred}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

struct Monomial {
  cplx coefficient;
  Word word;  // empty word encodes a constant term
};

/// Formal polynomial in noncommuting letters x_j, x_j^* with complex
/// coefficients.  Zero coefficients are never stored.
class NCPolynomial {
 public:
  NCPolynomial() = default;
  explicit NCPolynomial(std::vector<Monomial> monomials);

  static NCPolynomial variable(int index);
  static NCPolynomial constant(cplx value);

  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool empty() const { return monomials_.empty(); }

  /// Largest variable index that appears; 0 for constant polynomials.
  int variable_count() const;
  /// Length of the longest word.
  int degree() const;

  /// P^*: words reversed, letters starred, coefficients conjugated.
  NCPolynomial adjoint() const;

  NCPolynomial operator+(const NCPolynomial& rhs) const;
  NCPolynomial operator-(const NCPolynomial& rhs) const;
  NCPolynomial operator*(const NCPolynomial& rhs) const;
  NCPolynomial operator*(cplx s) const;

  std::string to_string() const;

 private:
  void combine_like_terms();

  std::vector<Monomial> monomials_;
};

/// The formal 2x2 hermitization [[0, P], [P^*, 0]]: stores P together with
/// its adjoint so the block object can be evaluated or inspected.
struct HermitizedPoly {
  NCPolynomial upper_right;  // P
  NCPolynomial lower_left;   // P^*
};

HermitizedPoly hermitize(const NCPolynomial& p);

}  // namespace freebrown
