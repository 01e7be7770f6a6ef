#include "freebrown/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

constexpr double kPi = std::numbers::pi;

// Semicircle transform of radius R with the branch G ~ 1/z at infinity;
// the cut-aware square root is sqrt(z-R)*sqrt(z+R).
cplx semicircle_cauchy(cplx z, double radius) {
  const cplx s = std::sqrt(z - radius) * std::sqrt(z + radius);
  return 2.0 * (z - s) / (radius * radius);
}

// Left side minus right side of the determinant equation, as a function of d.
double determinant_equation(const EllipticParams& p, cplx lambda, double eps, double d) {
  const double g2 = std::norm(p.gamma);
  const double num = std::norm(p.gamma * std::conj(lambda) + lambda * d);
  const double dd = d * d - g2;
  double t1;
  if (p.equal_variances()) {
    t1 = eps * eps / ((d + p.alpha) * (d + p.alpha));
  } else if (p.beta == 0.0) {
    // the alpha/(alpha - beta e^s) factor collapses; exponent -alpha/d > 0
    t1 = eps * eps * std::exp(-p.alpha / d) / (d * d);
  } else if (p.alpha == 0.0) {
    // mirror case, exponent -beta/d of the rearranged ratio
    t1 = eps * eps * std::exp(-p.beta / d) / (d * d);
  } else {
    // below the threshold s stays within (0, log(alpha/beta)) or its mirror,
    // so the direct form cannot overflow
    const double s = (p.beta - p.alpha) / d;
    const double es = std::exp(s);
    const double den = p.alpha - p.beta * es;
    t1 = eps * eps * (p.alpha - p.beta) * (p.alpha - p.beta) * es / (den * den * d * d);
  }
  return 1.0 / d + t1 + num / (dd * dd);
}

// Value the inside branch takes in the eps -> 0 limit.
double inside_d(const EllipticParams& p) {
  return d_threshold(p);
}

// The bracket factor of the eps = 0 equation whose root yields the outside
// branch: (d^2-|g|^2)^2/d + |g conj(l) + l d|^2.
double outside_branch_equation(const EllipticParams& p, cplx lambda, double d) {
  const double g2 = std::norm(p.gamma);
  const double dd = d * d - g2;
  return dd * dd / d + std::norm(p.gamma * std::conj(lambda) + lambda * d);
}

}  // namespace

void EllipticParams::validate() const {
  if (alpha < 0.0 || beta < 0.0)
    throw DegenerateParams("elliptic: alpha and beta must be nonnegative");
  if (std::abs(gamma) > std::sqrt(alpha * beta) + 1e-12)
    throw DegenerateParams("elliptic: |gamma| must not exceed sqrt(alpha*beta)");
  if (alpha == 0.0 && beta == 0.0 && gamma == cplx(0.0))
    throw DegenerateParams("elliptic: parameters are all zero");
}

bool EllipticParams::equal_variances() const {
  return std::abs(alpha - beta) <= 1e-12 * std::max({alpha, beta, 1.0});
}

bool EllipticParams::degenerate_interval() const {
  return equal_variances() && std::abs(std::abs(gamma) - alpha) <= 1e-12 * std::max(alpha, 1.0) &&
         alpha > 0.0;
}

bool EllipticParams::quasinilpotent_corner() const {
  return !equal_variances() && (alpha == 0.0 || beta == 0.0);
}

double d_threshold(const EllipticParams& p) {
  p.validate();
  if (p.alpha == 0.0 && p.beta == 0.0)
    throw DegenerateParams("d_threshold: alpha = beta = 0");
  if (p.equal_variances()) return -p.alpha;
  if (p.alpha == 0.0 || p.beta == 0.0) return 0.0;  // limit of the formula
  return (p.beta - p.alpha) / (std::log(p.alpha) - std::log(p.beta));
}

double solve_d(const EllipticParams& p, cplx lambda, double eps) {
  p.validate();
  if (!(eps > 0.0)) throw DomainError("solve_d: eps must be positive");
  const double th = d_threshold(p);

  // f -> +inf as d -> th^-, f < 0 for very negative d; scan a log mesh of
  // offsets below the threshold for the sign change.  The mesh reaches from
  // 1e-20 (roots hugging the threshold at tiny eps) up to 1e12 (the
  // d ~ -eps^2 escape at large eps).
  double prev_d = 0.0;
  bool have_pos = false;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int i = -80; i <= 48; ++i) {
    const double offset = std::pow(10.0, 0.25 * i);
    const double d = th - offset;
    if (d == th) continue;  // offset underflowed against |th|
    const double f = determinant_equation(p, lambda, eps, d);
    if (f > 0.0) {
      have_pos = true;
      prev_d = d;
    } else if (have_pos) {
      lo = d;
      hi = prev_d;
      bracketed = true;
      break;
    }
  }
  if (!bracketed)
    throw BracketFailure("solve_d: no sign change below threshold " + std::to_string(th) +
                         " at eps " + std::to_string(eps));

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (determinant_equation(p, lambda, eps, mid) > 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

double d_zero(const EllipticParams& p, cplx lambda) {
  p.validate();
  // continuation along the decreasing branch: follow solve_d down an
  // epsilon ladder, then snap to the nearest root of the eps = 0 equation
  const double scale = std::max({1.0, std::abs(lambda), std::sqrt(p.alpha + p.beta)});
  double d = 0.0;
  double eps = scale;
  for (int i = 0; i < 30; ++i) {
    d = solve_d(p, lambda, eps);
    eps *= 0.25;
    if (eps < 1e-9 * scale) break;
  }

  const double di = inside_d(p);
  // candidate from the outside-branch factor, refined near the continuation value
  double best_outside = d;
  {
    double lo = d - std::max(1e-6, 0.05 * std::abs(d));
    double hi_limit = d_threshold(p);
    double hi = std::min(d + std::max(1e-6, 0.05 * std::abs(d)), hi_limit - 1e-14);
    double flo = outside_branch_equation(p, lambda, lo);
    double fhi = outside_branch_equation(p, lambda, hi);
    if (flo == 0.0) {
      best_outside = lo;
    } else if (fhi == 0.0) {
      best_outside = hi;
    } else if ((flo < 0.0) != (fhi < 0.0)) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((outside_branch_equation(p, lambda, mid) < 0.0) == (flo < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      best_outside = 0.5 * (lo + hi);
    }
  }
  if (std::abs(d - di) <= std::abs(d - best_outside)) return di;
  return best_outside;
}

cplx elliptic_cauchy(const EllipticParams& p, cplx lambda) {
  p.validate();
  if (p.degenerate_interval()) {
    // rotate to a semicircular element of radius 2*sqrt(alpha)
    const double phi = 0.5 * std::arg(p.gamma);
    const cplx rot = std::polar(1.0, -phi);
    return rot * semicircle_cauchy(rot * lambda, 2.0 * std::sqrt(p.alpha));
  }
  if (p.quasinilpotent_corner()) {
    // closed-form threshold degenerates; follow the epsilon continuation
    if (std::abs(lambda) == 0.0) return 0.0;
    const double d = d_zero(p, lambda);
    const double g2 = std::norm(p.gamma);
    return (-std::conj(p.gamma) * lambda - std::conj(lambda) * d) / (d * d - g2);
  }

  const double d0 = inside_d(p);
  const double r2 = boundary_radius_sq(p, std::arg(lambda));
  if (std::norm(lambda) <= r2) {
    const double g2 = std::norm(p.gamma);
    return (-std::conj(p.gamma) * lambda - std::conj(lambda) * d0) / (d0 * d0 - g2);
  }
  if (p.gamma == cplx(0.0)) return 1.0 / lambda;
  const cplx s = std::sqrt(lambda * lambda - 4.0 * p.gamma);
  // branch with |lambda * G - 1| -> 0 at infinity
  const cplx den_plus = lambda + s;
  const cplx den_minus = lambda - s;
  const cplx den = (std::abs(den_plus) >= std::abs(den_minus)) ? den_plus : den_minus;
  return 2.0 / den;
}

double boundary_radius_sq(const EllipticParams& p, double theta) {
  const double d0 = inside_d(p);
  const double g2 = std::norm(p.gamma);
  const double big_d = d0 * d0 - g2;
  if (big_d <= 0.0)
    throw DegenerateEllipse("boundary: support degenerates (alpha = beta = |gamma|)");
  const cplx e2 = std::polar(1.0, 2.0 * theta);
  const double denom = -d0 * (d0 * d0 + g2) - 2.0 * d0 * d0 * (std::conj(p.gamma) * e2).real();
  if (denom <= 0.0)
    throw DegenerateEllipse("boundary: nonpositive radius denominator");
  return big_d * big_d / denom;
}

std::vector<cplx> elliptic_boundary(const EllipticParams& p, int n_points) {
  p.validate();
  if (n_points < 8) throw DomainError("boundary: need n_points >= 8");
  if (p.degenerate_interval()) {
    const cplx dir = std::polar(2.0 * std::sqrt(p.alpha), 0.5 * std::arg(p.gamma));
    return {dir, -dir};
  }
  if (p.quasinilpotent_corner() || (p.alpha == 0.0 || p.beta == 0.0))
    throw DegenerateEllipse("boundary: support reduces to a point for this corner case");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta = 2.0 * kPi * i / n_points;
    out.push_back(std::polar(std::sqrt(boundary_radius_sq(p, theta)), theta));
  }
  return out;
}

double elliptic_area(const EllipticParams& p, int n_points) {
  const auto poly = elliptic_boundary(p, n_points);
  if (poly.size() < 3) return 0.0;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const cplx a = poly[i];
    const cplx b = poly[(i + 1) % poly.size()];
    twice_area += a.real() * b.imag() - b.real() * a.imag();
  }
  return 0.5 * std::abs(twice_area);
}

double elliptic_density(const EllipticParams& p, cplx lambda) {
  p.validate();
  if (p.degenerate_interval())
    throw DegenerateEllipse("density: support degenerates to an interval");
  if (p.quasinilpotent_corner())
    throw DegenerateEllipse("density: support degenerates to a point");
  const double r2 = boundary_radius_sq(p, std::arg(lambda));
  if (std::norm(lambda) > r2) return 0.0;
  return 1.0 / elliptic_area(p, 4096);
}

std::vector<cplx> g11_profile(const EllipticParams& p, cplx lambda, double eps,
                              const std::vector<double>& ts) {
  p.validate();
  const double d = solve_d(p, lambda, eps);
  std::vector<cplx> out;
  out.reserve(ts.size());
  const cplx ie(0.0, eps);
  for (double t : ts) {
    if (p.equal_variances()) {
      out.push_back(ie / (d + p.alpha));
    } else {
      const double s = (p.beta - p.alpha) / d;
      const double den = (p.alpha - p.beta * std::exp(s)) * d;
      out.push_back(ie * (p.alpha - p.beta) * std::exp(s * t) / den);
    }
  }
  return out;
}

}  // namespace freebrown
