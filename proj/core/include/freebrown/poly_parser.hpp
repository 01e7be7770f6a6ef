#pragma once

#include <string>

#include "freebrown/ncpoly.hpp"

namespace freebrown {

/// Parses the polynomial text grammar, e.g.
///
///   (2+3i)*x1*x2^* + x3 - 1
///
/// Terms are products of complex literals (parenthesized when they carry
/// both parts) and variables x1, x2, ... with `^*` marking the adjoint.
/// Whitespace is ignored.  Throws ParseError carrying the offending byte
/// position.
NCPolynomial parse_polynomial(const std::string& text);

}  // namespace freebrown
