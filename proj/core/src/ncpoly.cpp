#include "freebrown/ncpoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

// canonical ordering so words can key a map
bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].variable != b[i].variable) return a[i].variable < b[i].variable;
    if (a[i].starred != b[i].starred) return !a[i].starred;
  }
  return false;
}

}  // namespace

NCPolynomial::NCPolynomial(std::vector<Monomial> monomials)
    : monomials_(std::move(monomials)) {
  combine_like_terms();
}

void NCPolynomial::combine_like_terms() {
  std::map<Word, cplx, decltype(&word_less)> acc(&word_less);
  for (const auto& m : monomials_) acc[m.word] += m.coefficient;
  monomials_.clear();
  for (auto& [word, coeff] : acc) {
    if (std::abs(coeff) > 0.0) monomials_.push_back({coeff, word});
  }
}

NCPolynomial NCPolynomial::variable(int index) {
  return NCPolynomial({{cplx(1.0), {Letter{index, false}}}});
}

NCPolynomial NCPolynomial::constant(cplx value) {
  return NCPolynomial({{value, {}}});
}

int NCPolynomial::variable_count() const {
  int best = 0;
  for (const auto& m : monomials_)
    for (const auto& l : m.word) best = std::max(best, l.variable);
  return best;
}

int NCPolynomial::degree() const {
  std::size_t best = 0;
  for (const auto& m : monomials_) best = std::max(best, m.word.size());
  return static_cast<int>(best);
}

NCPolynomial NCPolynomial::adjoint() const {
  std::vector<Monomial> out;
  out.reserve(monomials_.size());
  for (const auto& m : monomials_) {
    Word w(m.word.rbegin(), m.word.rend());
    for (auto& l : w) l = l.adjoint();
    out.push_back({std::conj(m.coefficient), std::move(w)});
  }
  return NCPolynomial(std::move(out));
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& rhs) const {
  std::vector<Monomial> out = monomials_;
  out.insert(out.end(), rhs.monomials_.begin(), rhs.monomials_.end());
  return NCPolynomial(std::move(out));
}

NCPolynomial NCPolynomial::operator-(const NCPolynomial& rhs) const {
  std::vector<Monomial> out = monomials_;
  for (const auto& m : rhs.monomials_) out.push_back({-m.coefficient, m.word});
  return NCPolynomial(std::move(out));
}

NCPolynomial NCPolynomial::operator*(const NCPolynomial& rhs) const {
  std::vector<Monomial> out;
  out.reserve(monomials_.size() * rhs.monomials_.size());
  for (const auto& a : monomials_) {
    for (const auto& b : rhs.monomials_) {
      Word w = a.word;
      w.insert(w.end(), b.word.begin(), b.word.end());
      out.push_back({a.coefficient * b.coefficient, std::move(w)});
    }
  }
  return NCPolynomial(std::move(out));
}

NCPolynomial NCPolynomial::operator*(cplx s) const {
  std::vector<Monomial> out = monomials_;
  for (auto& m : out) m.coefficient *= s;
  return NCPolynomial(std::move(out));
}

std::string NCPolynomial::to_string() const {
  if (monomials_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : monomials_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << m.coefficient.real();
    if (m.coefficient.imag() != 0.0) os << (m.coefficient.imag() > 0 ? "+" : "") << m.coefficient.imag() << "i";
    os << ")";
    for (const auto& l : m.word) {
      os << "*x" << l.variable;
      if (l.starred) os << "^*";
    }
  }
  return os.str();
}

HermitizedPoly hermitize(const NCPolynomial& p) {
  return HermitizedPoly{p, p.adjoint()};
}

}  // namespace freebrown
