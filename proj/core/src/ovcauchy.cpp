#include "freebrown/ovcauchy.hpp"

#include <cmath>

#include "freebrown/errors.hpp"

namespace freebrown {

VariableModel VariableModel::selfadjoint(Measure1D mu) {
  if (mu.support_kind() != SupportKind::RealLine)
    throw InvalidMeasure("selfadjoint model needs a real-line law");
  return {Kind::Selfadjoint, std::move(mu)};
}

VariableModel VariableModel::haar_unitary(int nodes) {
  return {Kind::HaarUnitary, Measure1D::haar_unitary(nodes)};
}

VariableModel VariableModel::unitary(Measure1D angle_law) {
  if (angle_law.support_kind() != SupportKind::UnitCircleAngle)
    throw InvalidMeasure("unitary model needs an angle law on the circle");
  return {Kind::Unitary, std::move(angle_law)};
}

Summand::Summand(VarTerm term, VariableModel m)
    : dim(term.coeff.dim()),
      constant(std::move(term.constant)),
      coeff(std::move(term.coeff)),
      model(std::move(m)) {
  if (!constant.is_hermitian(1e-12 * std::max(1.0, constant.max_abs())))
    throw NotHermitian("Summand: constant part must be hermitian");
}

Summand::Summand(int d, ComplexMatrix c, ComplexMatrix e, VariableModel m)
    : dim(d), constant(std::move(c)), coeff(std::move(e)), model(std::move(m)) {
  if (!constant.is_hermitian(1e-12 * std::max(1.0, constant.max_abs())))
    throw NotHermitian("Summand: constant part must be hermitian");
}

namespace {

void check_upper_half_plane(const ComplexMatrix& b) {
  const double me = min_eig_hermitian(imag_part(b));
  if (!(me > 0.0))
    throw NotInUpperHalfPlane("ov_cauchy: Im b has min eigenvalue " + std::to_string(me));
}

// Accumulates w * (base - E*v - E^† * conj(v))^{-1} into acc.
void accumulate_node(const ComplexMatrix& base, const ComplexMatrix& e,
                     const ComplexMatrix& e_adj, cplx v, double w, LuInverter& lu,
                     ComplexMatrix& scratch, ComplexMatrix& inv, ComplexMatrix& acc) {
  const int n = base.dim();
  scratch = base;
  const cplx vc = std::conj(v);
  const cplx* pe = e.data();
  const cplx* pea = e_adj.data();
  cplx* ps = scratch.data();
  const std::size_t total = static_cast<std::size_t>(n) * n;
  for (std::size_t k = 0; k < total; ++k) ps[k] -= pe[k] * v + pea[k] * vc;
  lu.invert(scratch, inv);
  cplx* pa = acc.data();
  const cplx* pi = inv.data();
  for (std::size_t k = 0; k < total; ++k) pa[k] += w * pi[k];
}

ComplexMatrix quadrature_g(const Summand& s, const ComplexMatrix& b, LuInverter& lu,
                           ComplexMatrix& scratch, ComplexMatrix& inv) {
  if (b.dim() != s.dim)
    throw DimensionMismatch("ov_cauchy: argument dimension does not match the summand");
  check_upper_half_plane(b);

  const ComplexMatrix base = b - s.constant;
  const ComplexMatrix e_adj = s.coeff.adjoint();
  ComplexMatrix acc(s.dim);
  const bool circle = s.model.kind != VariableModel::Kind::Selfadjoint;
  try {
    for (const auto& p : s.model.law.atom_list()) {
      const cplx v = circle ? std::polar(1.0, p.location) : cplx(p.location);
      accumulate_node(base, s.coeff, e_adj, v, p.weight, lu, scratch, inv, acc);
    }
    for (const auto& p : s.model.law.quadrature()) {
      const cplx v = circle ? std::polar(1.0, p.location) : cplx(p.location);
      accumulate_node(base, s.coeff, e_adj, v, p.weight, lu, scratch, inv, acc);
    }
  } catch (const SingularMatrix& err) {
    // cannot happen for Im b > 0; if it does, the pencil data is broken
    throw SingularResolvent(std::string("ov_cauchy: singular resolvent node: ") + err.what());
  }
  return acc;
}

}  // namespace

ComplexMatrix ov_cauchy(const Summand& s, const ComplexMatrix& b) {
  LuInverter lu;
  ComplexMatrix scratch, inv;
  return quadrature_g(s, b, lu, scratch, inv);
}

ComplexMatrix ov_F(const Summand& s, const ComplexMatrix& b) {
  const ComplexMatrix g = ov_cauchy(s, b);
  try {
    return invert(g);
  } catch (const SingularMatrix& err) {
    throw SingularCauchy(std::string("ov_F: G(b) is numerically singular: ") + err.what());
  }
}

ComplexMatrix SummandOracle::g(const ComplexMatrix& b) {
  return quadrature_g(summand_, b, lu_, scratch_, inv_);
}

}  // namespace freebrown
