#pragma once

#include <memory>

#include "freebrown/complex_matrix.hpp"
#include "freebrown/linearization.hpp"
#include "freebrown/measure.hpp"

namespace freebrown {

/// Spectral model of one normal variable.
struct VariableModel {
  enum class Kind { Selfadjoint, HaarUnitary, Unitary };

  Kind kind = Kind::Selfadjoint;
  Measure1D law = Measure1D::point_mass(0.0);  // angles for the unitary kinds

  static VariableModel selfadjoint(Measure1D mu);
  static VariableModel haar_unitary(int nodes = 512);
  /// Unitary with a given angle distribution on [0, 2*pi).
  static VariableModel unitary(Measure1D angle_law);
};

/// One term of the variable split of a pencil:
///   S = constant + E x + E^† x^*
/// with x a normal variable described by `model`.
struct Summand {
  int dim = 0;
  ComplexMatrix constant;  // hermitian
  ComplexMatrix coeff;     // E
  VariableModel model;

  Summand(VarTerm term, VariableModel m);
  Summand(int dim, ComplexMatrix constant, ComplexMatrix coeff, VariableModel m);
};

/// G(b) = integral of (b - constant - E v - E^† conj(v))^{-1} over the
/// spectral law of the variable.  Requires Im b > 0; the result satisfies
/// Im G(b) <= 0.
ComplexMatrix ov_cauchy(const Summand& s, const ComplexMatrix& b);

/// F(b) = G(b)^{-1}; satisfies Im F(b) >= Im b (up to quadrature error).
ComplexMatrix ov_F(const Summand& s, const ComplexMatrix& b);

/// Anything that can evaluate a matrix-valued Cauchy transform.  Stateful
/// implementations (memoized partial sums) are confined to one solver.
class CauchyOracle {
 public:
  virtual ~CauchyOracle() = default;
  virtual int dim() const = 0;
  virtual ComplexMatrix g(const ComplexMatrix& b) = 0;
};

/// Oracle backed by quadrature over one summand.
class SummandOracle final : public CauchyOracle {
 public:
  explicit SummandOracle(Summand s) : summand_(std::move(s)) {}
  int dim() const override { return summand_.dim; }
  ComplexMatrix g(const ComplexMatrix& b) override;
  const Summand& summand() const { return summand_; }

 private:
  Summand summand_;
  LuInverter lu_;
  ComplexMatrix scratch_;
  ComplexMatrix inv_;
};

}  // namespace freebrown
