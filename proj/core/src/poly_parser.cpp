#include "freebrown/poly_parser.hpp"

#include <cctype>
#include <cstdlib>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NCPolynomial parse() {
    std::vector<Monomial> terms;
    skip_ws();
    if (done()) throw ParseError("empty polynomial", pos_);
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = (get() == '-') ? -1.0 : 1.0;
    }
    terms.push_back(parse_term(sign));
    for (;;) {
      skip_ws();
      if (done()) break;
      const char c = peek();
      if (c != '+' && c != '-')
        throw ParseError(std::string("expected '+' or '-', found '") + c + "'", pos_);
      get();
      terms.push_back(parse_term(c == '-' ? -1.0 : 1.0));
    }
    return NCPolynomial(std::move(terms));
  }

 private:
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  Monomial parse_term(double sign) {
    Monomial m{cplx(sign), {}};
    bool any = false;
    for (;;) {
      skip_ws();
      if (done()) break;
      const char c = peek();
      if (c == 'x') {
        m.word.push_back(parse_letter());
      } else if (c == '(') {
        m.coefficient *= parse_paren_complex();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'i') {
        m.coefficient *= parse_number();
      } else {
        break;
      }
      any = true;
      skip_ws();
      if (!done() && peek() == '*') {
        get();
        continue;
      }
      // juxtaposition is not part of the grammar; stop at +, - or end
      if (!done() && peek() != '+' && peek() != '-')
        throw ParseError(std::string("expected '*', '+' or '-', found '") + peek() + "'",
                         pos_);
      break;
    }
    if (!any) throw ParseError("empty term", pos_);
    return m;
  }

  Letter parse_letter() {
    get();  // 'x'
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("variable index expected after 'x'", pos_);
    int index = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
      index = index * 10 + (get() - '0');
    if (index < 1) throw ParseError("variable indices start at 1", pos_);
    Letter l{index, false};
    if (!done() && peek() == '^') {
      const std::size_t mark = pos_;
      get();
      if (done() || peek() != '*') throw ParseError("expected '*' after '^'", mark + 1);
      get();
      l.starred = true;
    }
    return l;
  }

  double parse_real() {
    const std::size_t start = pos_;
    while (!done() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                       peek() == 'e' || peek() == 'E' ||
                       ((peek() == '+' || peek() == '-') &&
                        (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    if (pos_ == start) throw ParseError("number expected", pos_);
    const std::string tok = text_.substr(start, pos_ - start);
    char* end = nullptr;
    const double value = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ParseError("malformed number '" + tok + "'", start);
    return value;
  }

  cplx parse_number() {
    if (peek() == 'i') {
      get();
      return cplx(0.0, 1.0);
    }
    const double value = parse_real();
    if (!done() && peek() == 'i') {
      get();
      return cplx(0.0, value);
    }
    return cplx(value);
  }

  cplx parse_paren_complex() {
    get();  // '('
    skip_ws();
    double sign = 1.0;
    if (!done() && (peek() == '+' || peek() == '-')) sign = (get() == '-') ? -1.0 : 1.0;
    skip_ws();
    cplx value = parse_number() * sign;
    skip_ws();
    while (!done() && (peek() == '+' || peek() == '-')) {
      const double s = (get() == '-') ? -1.0 : 1.0;
      skip_ws();
      value += parse_number() * s;
      skip_ws();
    }
    if (done() || peek() != ')') throw ParseError("expected ')'", pos_);
    get();
    return value;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

NCPolynomial parse_polynomial(const std::string& text) {
  Parser parser(text);
  NCPolynomial p = parser.parse();
  if (p.empty()) throw ParseError("polynomial reduces to zero", 0);
  // variable indices must form a contiguous range 1..k
  const int k = p.variable_count();
  std::vector<bool> seen(static_cast<std::size_t>(k) + 1, false);
  for (const auto& m : p.monomials())
    for (const auto& l : m.word) seen[static_cast<std::size_t>(l.variable)] = true;
  for (int j = 1; j <= k; ++j) {
    if (!seen[static_cast<std::size_t>(j)])
      throw ParseError("variable indices must be contiguous; x" + std::to_string(j) +
                           " is missing",
                       0);
  }
  return p;
}

}  // namespace freebrown
