#pragma once

#include <stdexcept>
#include <string>

namespace freebrown {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- dense matrix kernel ------------------------------------------------

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// -- spectral measures ---------------------------------------------------

class UnsupportedMeasure : public Error {
 public:
  explicit UnsupportedMeasure(const std::string& msg) : Error(msg) {}
};

class PoleHit : public Error {
 public:
  explicit PoleHit(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

class InvalidMeasure : public Error {
 public:
  explicit InvalidMeasure(const std::string& msg) : Error(msg) {}
};

// -- polynomials and linearization ----------------------------------------

class EmptyWord : public Error {
 public:
  explicit EmptyWord(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg), position_(position) {}
  /// Byte offset into the source text where parsing failed.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// -- operator-valued transforms -------------------------------------------

class NotInUpperHalfPlane : public Error {
 public:
  explicit NotInUpperHalfPlane(const std::string& msg) : Error(msg) {}
};

class SingularResolvent : public Error {
 public:
  explicit SingularResolvent(const std::string& msg) : Error(msg) {}
};

class SingularCauchy : public Error {
 public:
  explicit SingularCauchy(const std::string& msg) : Error(msg) {}
};

// -- subordination solver ---------------------------------------------------

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& msg, double residual, int iterations)
      : Error(msg), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class DivergedFromHalfPlane : public Error {
 public:
  explicit DivergedFromHalfPlane(const std::string& msg) : Error(msg) {}
};

// -- closed-form fast paths ----------------------------------------------

class DegenerateMeasure : public Error {
 public:
  explicit DegenerateMeasure(const std::string& msg) : Error(msg) {}
};

class OutsideAnnulus : public Error {
 public:
  explicit OutsideAnnulus(const std::string& msg) : Error(msg) {}
};

class DegenerateParams : public Error {
 public:
  explicit DegenerateParams(const std::string& msg) : Error(msg) {}
};

class BracketFailure : public Error {
 public:
  explicit BracketFailure(const std::string& msg) : Error(msg) {}
};

class DegenerateEllipse : public Error {
 public:
  explicit DegenerateEllipse(const std::string& msg) : Error(msg) {}
};

// -- random matrix oracle ----------------------------------------------------

class InvalidCovariance : public Error {
 public:
  explicit InvalidCovariance(const std::string& msg) : Error(msg) {}
};

class GridMismatch : public Error {
 public:
  explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

class EigensolverFailure : public Error {
 public:
  explicit EigensolverFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace freebrown
