#include "freebrown/rdiag.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

// Quadrature support reaching closer to zero than this is treated as the
// a.c. part touching zero, making the inverse first moment divergent.
constexpr double kZeroSupportTol = 1e-3;

}  // namespace

RDiagonalSpec::RDiagonalSpec(Measure1D mu) : mu_a2(std::move(mu)) {
  if (mu_a2.support_kind() != SupportKind::RealLine)
    throw InvalidMeasure("RDiagonalSpec: mu_a2 must be a real-line measure");
  if (mu_a2.min_support() < -1e-12)
    throw InvalidMeasure("RDiagonalSpec: mu_a2 must be supported in [0, inf)");
}

Radii radii(const RDiagonalSpec& spec) {
  const Measure1D& mu = spec.mu_a2;
  Radii out;
  out.outer = std::sqrt(std::max(mu.mean(), 0.0));

  if (mu.mass_at(0.0) > 0.0) {
    out.inner = 0.0;
    return out;
  }
  // a.c. support reaching zero means the t^{-1} moment diverges; the
  // discretization cannot see that, so detect it from the node positions
  bool touches_zero = false;
  for (const auto& p : mu.quadrature()) {
    if (p.weight > 0.0 && p.location <= kZeroSupportTol) touches_zero = true;
  }
  if (touches_zero) {
    out.inner = 0.0;
    return out;
  }
  double inv_moment = 0.0;
  for (const auto& p : mu.atom_list()) inv_moment += p.weight / p.location;
  for (const auto& p : mu.quadrature()) inv_moment += p.weight / p.location;
  out.inner = 1.0 / std::sqrt(inv_moment);
  return out;
}

double radial_cdf(const RDiagonalSpec& spec, double r) {
  if (r < 0.0) throw DomainError("radial_cdf: r must be nonnegative");
  const Radii rad = radii(spec);
  if (spec.mu_a2.is_point_mass()) {
    // uniform measure on the circle of radius sqrt(c); the annulus is empty
    return r >= rad.outer ? 1.0 : 0.0;
  }
  if (r <= rad.inner) return 0.0;
  if (r >= rad.outer) return 1.0;

  const double target = r * r;
  // floor of g on the discretized data; below it the annulus has no mass yet
  const double g_floor = eta_over_v(spec.mu_a2, -1e15);
  if (target <= g_floor * (1.0 + 1e-9)) return 0.0;

  const double v = invert_g(spec.mu_a2, target);
  return 1.0 / (1.0 - target * v);
}

cplx rdiag_cauchy(const RDiagonalSpec& spec, cplx lambda) {
  const double r = std::abs(lambda);
  if (r == 0.0) return 0.0;
  return radial_cdf(spec, r) / lambda;
}

double radial_density(const RDiagonalSpec& spec, double r) {
  const Radii rad = radii(spec);
  if (!(r > rad.inner && r < rad.outer))
    throw OutsideAnnulus("radial_density: r = " + std::to_string(r) +
                         " outside (" + std::to_string(rad.inner) + ", " +
                         std::to_string(rad.outer) + ")");
  const double step = std::min(1e-5, (rad.outer - rad.inner) / 1000.0);
  const double hi = radial_cdf(spec, r + step);
  const double lo = radial_cdf(spec, r - step);
  const double d = (hi - lo) / (2.0 * step) / (2.0 * std::numbers::pi * r);
  return std::max(d, 0.0);
}

}  // namespace freebrown
