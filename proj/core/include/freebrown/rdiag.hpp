#pragma once

#include <utility>

#include "freebrown/measure.hpp"

namespace freebrown {

/// An operator u*a with u Haar unitary free from a >= 0, described by the
/// distribution of a^2 = x x^*.  Its spectral distribution is rotationally
/// invariant and determined by the radial profile computed below.
struct RDiagonalSpec {
  Measure1D mu_a2;

  explicit RDiagonalSpec(Measure1D mu);
};

struct Radii {
  double inner = 0.0;
  double outer = 0.0;
};

/// inner = 1/sqrt(mean of t^{-1}) (0 when that integral diverges, detected by
/// quadrature support touching zero, or when mass sits at zero);
/// outer = sqrt(mean of t).
Radii radii(const RDiagonalSpec& spec);

/// Radial distribution function of the spectral measure: 0 up to the inner
/// radius, 1 beyond the outer radius, and 1/(1 - r^2 v) with g(v) = r^2 in
/// between (the S-transform inversion run through g(v) = eta(v)/v).
double radial_cdf(const RDiagonalSpec& spec, double r);

/// Scalar Cauchy transform at lambda: radial_cdf(|lambda|) / lambda,
/// equal to 1/lambda outside the outer radius and 0 at lambda = 0.
cplx rdiag_cauchy(const RDiagonalSpec& spec, cplx lambda);

/// Density of the spectral measure on the open annulus, from the centered
/// difference of the radial distribution: cdf'(r) / (2 pi r).
double radial_density(const RDiagonalSpec& spec, double r);

}  // namespace freebrown
