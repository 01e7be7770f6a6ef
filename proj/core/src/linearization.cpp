#include "freebrown/linearization.hpp"

#include <algorithm>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

// Separate bookkeeping for x_j and x_j^* appearances.  Formal
// selfadjointness of the construction forces starred == unstarred^†,
// which is asserted before E_j is extracted.
struct PencilBuilder {
  int dim;
  ComplexMatrix constant;
  std::map<int, ComplexMatrix> unstarred;  // A_j, coefficients of x_j
  std::map<int, ComplexMatrix> starred;    // B_j, coefficients of x_j^*

  explicit PencilBuilder(int d) : dim(d), constant(d) {}

  ComplexMatrix& slot(std::map<int, ComplexMatrix>& m, int var) {
    auto it = m.find(var);
    if (it == m.end()) it = m.emplace(var, ComplexMatrix(dim)).first;
    return it->second;
  }

  void add_letter(const Letter& l, int row, int col, cplx coeff) {
    if (l.starred)
      slot(starred, l.variable)(row, col) += coeff;
    else
      slot(unstarred, l.variable)(row, col) += coeff;
  }

  Linearization finish() {
    if (!constant.is_hermitian(1e-12))
      throw Error("linearization: constant matrix failed the hermitian check");
    Linearization out;
    out.dim = dim;
    out.constant = std::move(constant);
    for (auto& [var, a] : unstarred) {
      auto it = starred.find(var);
      const ComplexMatrix b = (it == starred.end()) ? ComplexMatrix(dim) : it->second;
      if ((b - a.adjoint()).max_abs() > 1e-12)
        throw Error("linearization: pencil is not formally selfadjoint");
      out.var_coeffs.emplace(var, std::move(a));
    }
    for (auto& [var, b] : starred) {
      if (!out.var_coeffs.count(var) && b.max_abs() > 1e-12)
        throw Error("linearization: pencil is not formally selfadjoint");
    }
    return out;
  }
};

// Writes the (4k-2)-dimensional monomial blocks into builder at the given
// block offset map: local 2x2 block i sits at scalar row block_row(i).
void emit_monomial_blocks(PencilBuilder& builder, cplx coeff, const Word& word,
                          const std::vector<int>& block_row) {
  const int k = static_cast<int>(word.size());
  const int nblocks = 2 * k - 1;

  // antidiagonal letters Y_l = [[x, 0], [0, 1]] for l = 1..k-1 and mirrors
  for (int l = 1; l <= k - 1; ++l) {
    const int r = block_row[static_cast<std::size_t>(l - 1)];
    const int c = block_row[static_cast<std::size_t>(nblocks - l)];
    builder.add_letter(word[static_cast<std::size_t>(l - 1)], r, c, 1.0);
    builder.constant(r + 1, c + 1) += 1.0;
    // Y_l^†
    builder.add_letter(word[static_cast<std::size_t>(l - 1)].adjoint(), c, r, 1.0);
    builder.constant(c + 1, r + 1) += 1.0;
  }

  // center block X_k = [[0, q x], [conj(q) x^*, 0]] carries the coefficient
  {
    const int r = block_row[static_cast<std::size_t>(k - 1)];
    const Letter& last = word[static_cast<std::size_t>(k - 1)];
    builder.add_letter(last, r, r + 1, coeff);
    builder.add_letter(last.adjoint(), r + 1, r, std::conj(coeff));
  }

  // -1 blocks below the antidiagonal and their mirrors
  for (int j = 1; j <= k - 1; ++j) {
    const int r = block_row[static_cast<std::size_t>(j)];
    const int c = block_row[static_cast<std::size_t>(nblocks - j)];
    builder.constant(r, c) -= 1.0;
    builder.constant(r + 1, c + 1) -= 1.0;
    builder.constant(c, r) -= 1.0;
    builder.constant(c + 1, r + 1) -= 1.0;
  }
}

void emit_corner_term(PencilBuilder& builder, cplx coeff, const Word& word) {
  if (word.empty()) {
    builder.constant(0, 1) += coeff;
    builder.constant(1, 0) += std::conj(coeff);
    return;
  }
  // degree-1 monomial: hermitized block placed at the corner directly
  const Letter& l = word.front();
  builder.add_letter(l, 0, 1, coeff);
  builder.add_letter(l.adjoint(), 1, 0, std::conj(coeff));
}

}  // namespace

Linearization linearize_monomial(cplx coeff, const Word& word) {
  const int k = static_cast<int>(word.size());
  if (k == 0)
    throw EmptyWord("linearize_monomial: constants belong in the stacked constant matrix");

  if (k == 1) {
    PencilBuilder builder(2);
    emit_corner_term(builder, coeff, word);
    return builder.finish();
  }

  const int nblocks = 2 * k - 1;
  PencilBuilder builder(4 * k - 2);
  std::vector<int> block_row(static_cast<std::size_t>(nblocks));
  for (int i = 0; i < nblocks; ++i) block_row[static_cast<std::size_t>(i)] = 2 * i;
  emit_monomial_blocks(builder, coeff, word, block_row);
  return builder.finish();
}

Linearization linearize_polynomial(const NCPolynomial& p) {
  if (p.empty()) throw Error("linearize_polynomial: zero polynomial");

  int dim = 2;
  for (const auto& m : p.monomials()) {
    const int k = static_cast<int>(m.word.size());
    if (k >= 2) dim += 4 * k - 4;
  }

  PencilBuilder builder(dim);
  int offset = 2;
  for (const auto& m : p.monomials()) {
    const int k = static_cast<int>(m.word.size());
    if (k <= 1) {
      emit_corner_term(builder, m.coefficient, m.word);
      continue;
    }
    const int nblocks = 2 * k - 1;
    std::vector<int> block_row(static_cast<std::size_t>(nblocks));
    block_row[0] = 0;  // shared corner
    for (int i = 1; i < nblocks; ++i)
      block_row[static_cast<std::size_t>(i)] = offset + 2 * (i - 1);
    emit_monomial_blocks(builder, m.coefficient, m.word, block_row);
    offset += 4 * k - 4;
  }
  return builder.finish();
}

std::vector<VarTerm> split_by_variable(const Linearization& l) {
  std::vector<VarTerm> out;
  if (l.var_coeffs.empty()) {
    out.push_back({0, ComplexMatrix(l.dim), l.constant});
    return out;
  }
  bool first = true;
  for (const auto& [var, coeff] : l.var_coeffs) {
    VarTerm term;
    term.variable = var;
    term.coeff = coeff;
    term.constant = first ? l.constant : ComplexMatrix(l.dim);
    first = false;
    out.push_back(std::move(term));
  }
  return out;
}

ComplexMatrix Linearization::evaluate(const std::vector<ComplexMatrix>& subst) const {
  const int n = subst.empty() ? 1 : subst.front().dim();
  for (const auto& s : subst) {
    if (s.dim() != n) throw DimensionMismatch("evaluate: substitutions differ in size");
  }
  const int big = dim * n;
  ComplexMatrix out(big);
  auto put_kron = [&](const ComplexMatrix& coeff, const ComplexMatrix& block) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const cplx c = coeff(i, j);
        if (c == cplx(0.0)) continue;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) out(i * n + a, j * n + b) += c * block(a, b);
      }
  };
  put_kron(constant, ComplexMatrix::identity(n));
  for (const auto& [var, coeff] : var_coeffs) {
    if (var < 1 || static_cast<std::size_t>(var) > subst.size())
      throw Error("evaluate: missing substitution for x" + std::to_string(var));
    const ComplexMatrix& s = subst[static_cast<std::size_t>(var - 1)];
    put_kron(coeff, s);
    put_kron(coeff.adjoint(), s.adjoint());
  }
  return out;
}

ComplexMatrix evaluate_poly(const NCPolynomial& p, const std::vector<ComplexMatrix>& subst) {
  const int n = subst.empty() ? 1 : subst.front().dim();
  ComplexMatrix out(n);
  for (const auto& m : p.monomials()) {
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (const auto& l : m.word) {
      if (l.variable < 1 || static_cast<std::size_t>(l.variable) > subst.size())
        throw Error("evaluate_poly: missing substitution for x" + std::to_string(l.variable));
      const ComplexMatrix& s = subst[static_cast<std::size_t>(l.variable - 1)];
      term = term * (l.starred ? s.adjoint() : s);
    }
    term *= m.coefficient;
    out += term;
  }
  return out;
}

}  // namespace freebrown
