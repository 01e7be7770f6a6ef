#pragma once

#include <complex>
#include <vector>

#include "freebrown/measure.hpp"

namespace freebrown {

/// Parameters of the triangular-elliptic operator: variance alpha above the
/// diagonal, beta below, pseudo-covariance gamma between mirrored entries,
/// with |gamma| <= sqrt(alpha*beta).
struct EllipticParams {
  double alpha = 1.0;
  double beta = 1.0;
  cplx gamma = 0.0;

  void validate() const;
  bool equal_variances() const;
  /// alpha = beta = |gamma| != 0: the support collapses to an interval and
  /// the operator is a rotated semicircular element.
  bool degenerate_interval() const;
  /// beta = 0 (or alpha = 0): the threshold formula degenerates to zero and
  /// the closed-form inside branch is replaced by epsilon continuation.
  bool quasinilpotent_corner() const;
};

/// Upper bound for the determinant-equation root:
/// (beta-alpha)/(log alpha - log beta), with the limit -alpha at alpha=beta.
double d_threshold(const EllipticParams& p);

/// Unique root d < d_threshold of the determinant equation at regularization
/// eps > 0, by bracketed bisection; eps -> d is decreasing.
double solve_d(const EllipticParams& p, cplx lambda, double eps);

/// Limit of solve_d as eps -> 0, selected by continuity along the decreasing
/// branch (continuation from large eps).
double d_zero(const EllipticParams& p, cplx lambda);

/// Scalar Cauchy transform: 2/(lambda -+ sqrt(lambda^2 - 4 gamma)) outside
/// the support ellipse (branch with lambda*G -> 1 at infinity) and
/// (-conj(gamma) lambda - conj(lambda) d) / (d^2 - |gamma|^2) inside.
cplx elliptic_cauchy(const EllipticParams& p, cplx lambda);

/// Boundary curve of the support, n_points >= 8, in angular order.
/// For the degenerate interval case returns the two endpoints.
std::vector<cplx> elliptic_boundary(const EllipticParams& p, int n_points);

/// Uniform density: 1/Area inside the boundary, 0 outside.  Area from the
/// shoelace formula on a 4096-gon.
double elliptic_density(const EllipticParams& p, cplx lambda);

/// Area enclosed by the boundary polygon at the given resolution.
double elliptic_area(const EllipticParams& p, int n_points = 4096);

/// Squared boundary radius along direction theta (non-degenerate case).
double boundary_radius_sq(const EllipticParams& p, double theta);

/// Diagnostic profile g11(t) at regularization eps (the displayed
/// closed form, evaluated with d = solve_d).
std::vector<cplx> g11_profile(const EllipticParams& p, cplx lambda, double eps,
                              const std::vector<double>& ts);

}  // namespace freebrown
