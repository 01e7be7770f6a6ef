#include "freebrown/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

void normalize_total(std::vector<Measure1D::Weighted>& pts, double target_mass) {
  double total = 0.0;
  for (const auto& p : pts) total += p.weight;
  if (total <= 0.0) return;
  const double s = target_mass / total;
  for (auto& p : pts) p.weight *= s;
}

}  // namespace

Measure1D::Measure1D(std::vector<Weighted> atoms, std::vector<Weighted> quadrature,
                     SupportKind kind)
    : atoms_(std::move(atoms)), quad_(std::move(quadrature)), kind_(kind) {
  double total = 0.0;
  for (const auto& p : atoms_) {
    if (p.weight < -1e-15) throw InvalidMeasure("negative atom weight");
    total += p.weight;
  }
  for (const auto& p : quad_) {
    if (p.weight < -1e-15) throw InvalidMeasure("negative quadrature weight");
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidMeasure("total mass " + std::to_string(total) + " is not 1");
  if (kind_ == SupportKind::UnitCircleAngle) {
    auto in_range = [](const Weighted& p) {
      return p.location >= 0.0 && p.location < 2.0 * kPi;
    };
    if (!std::all_of(atoms_.begin(), atoms_.end(), in_range) ||
        !std::all_of(quad_.begin(), quad_.end(), in_range))
      throw InvalidMeasure("circle angles must lie in [0, 2*pi)");
  }
}

Measure1D Measure1D::atoms(std::vector<Weighted> atoms, SupportKind kind) {
  return Measure1D(std::move(atoms), {}, kind);
}

Measure1D Measure1D::point_mass(double location, SupportKind kind) {
  return Measure1D({{location, 1.0}}, {}, kind);
}

Measure1D Measure1D::semicircle(double radius, int nodes) {
  // t = r*cos(theta); density maps to (2/pi) sin^2(theta) d(theta) on [0, pi]
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  const double h = kPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double theta = (i + 0.5) * h;
    quad[static_cast<std::size_t>(i)] = {radius * std::cos(theta),
                                         (2.0 / kPi) * std::sin(theta) * std::sin(theta) * h};
  }
  normalize_total(quad, 1.0);
  return Measure1D({}, std::move(quad), SupportKind::RealLine);
}

Measure1D Measure1D::free_poisson(double lambda, int nodes) {
  if (lambda <= 0.0) throw InvalidMeasure("free_poisson needs lambda > 0");
  const double sq = std::sqrt(lambda);
  const double a = (1.0 - sq) * (1.0 - sq);
  const double b = (1.0 + sq) * (1.0 + sq);
  const double ac_mass = std::min(lambda, 1.0);
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  const double h = kPi / nodes;
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  for (int i = 0; i < nodes; ++i) {
    const double theta = (i + 0.5) * h;
    const double t = mid + rad * std::cos(theta);
    const double s = std::sin(theta);
    quad[static_cast<std::size_t>(i)] = {t, (b - a) * (b - a) * s * s / (8.0 * kPi * t) * h};
  }
  normalize_total(quad, ac_mass);
  std::vector<Weighted> atom_pts;
  if (lambda < 1.0) atom_pts.push_back({0.0, 1.0 - lambda});
  return Measure1D(std::move(atom_pts), std::move(quad), SupportKind::RealLine);
}

Measure1D Measure1D::uniform(double a, double b, int nodes) {
  if (!(a < b)) throw InvalidMeasure("uniform needs a < b");
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    quad[static_cast<std::size_t>(i)] = {0.5 * (a + b) + 0.5 * (b - a) * x[static_cast<std::size_t>(i)],
                                         0.5 * w[static_cast<std::size_t>(i)]};
  }
  normalize_total(quad, 1.0);
  return Measure1D({}, std::move(quad), SupportKind::RealLine);
}

Measure1D Measure1D::arcsine(double radius, int nodes) {
  // t = r*cos(theta) turns the arcsine weight into d(theta)/pi
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  const double h = kPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double theta = (i + 0.5) * h;
    quad[static_cast<std::size_t>(i)] = {radius * std::cos(theta), 1.0 / nodes};
  }
  return Measure1D({}, std::move(quad), SupportKind::RealLine);
}

Measure1D Measure1D::quarter_circle(double radius, int nodes) {
  // s = r*sin(phi); density maps to (4/pi) cos^2(phi) d(phi) on [0, pi/2]
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  const double h = 0.5 * kPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double phi = (i + 0.5) * h;
    const double c = std::cos(phi);
    quad[static_cast<std::size_t>(i)] = {radius * std::sin(phi), (4.0 / kPi) * c * c * h};
  }
  normalize_total(quad, 1.0);
  return Measure1D({}, std::move(quad), SupportKind::RealLine);
}

Measure1D Measure1D::haar_unitary(int nodes) {
  std::vector<Weighted> quad(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    quad[static_cast<std::size_t>(i)] = {(i + 0.5) * 2.0 * kPi / nodes, 1.0 / nodes};
  }
  return Measure1D({}, std::move(quad), SupportKind::UnitCircleAngle);
}

double Measure1D::mean() const {
  double s = 0.0;
  for (const auto& p : atoms_) s += p.weight * p.location;
  for (const auto& p : quad_) s += p.weight * p.location;
  return s;
}

double Measure1D::min_support() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : atoms_)
    if (p.weight > 0.0) m = std::min(m, p.location);
  for (const auto& p : quad_)
    if (p.weight > 0.0) m = std::min(m, p.location);
  return m;
}

double Measure1D::max_support() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : atoms_)
    if (p.weight > 0.0) m = std::max(m, p.location);
  for (const auto& p : quad_)
    if (p.weight > 0.0) m = std::max(m, p.location);
  return m;
}

double Measure1D::mass_at(double location, double tol) const {
  double s = 0.0;
  for (const auto& p : atoms_)
    if (std::abs(p.location - location) <= tol) s += p.weight;
  return s;
}

bool Measure1D::is_point_mass(double tol) const {
  return max_support() - min_support() <= tol;
}

bool Measure1D::has_spread(double tol) const { return !is_point_mass(tol); }

std::vector<double> Measure1D::quantiles(int n) const {
  std::vector<Weighted> pts;
  pts.reserve(atoms_.size() + quad_.size());
  pts.insert(pts.end(), atoms_.begin(), atoms_.end());
  pts.insert(pts.end(), quad_.begin(), quad_.end());
  std::sort(pts.begin(), pts.end(),
            [](const Weighted& a, const Weighted& b) { return a.location < b.location; });
  std::vector<double> out(static_cast<std::size_t>(n));
  std::size_t j = 0;
  double cum = pts.empty() ? 0.0 : pts[0].weight;
  for (int i = 0; i < n; ++i) {
    const double level = (i + 0.5) / n;
    while (j + 1 < pts.size() && cum < level) {
      ++j;
      cum += pts[j].weight;
    }
    out[static_cast<std::size_t>(i)] = pts[j].location;
  }
  return out;
}

cplx scalar_cauchy(const Measure1D& mu, cplx z) {
  if (mu.support_kind() != SupportKind::RealLine)
    throw UnsupportedMeasure("scalar_cauchy expects a real-line measure");
  cplx s = 0.0;
  for (const auto& p : mu.atom_list()) s += p.weight / (z - p.location);
  for (const auto& p : mu.quadrature()) s += p.weight / (z - p.location);
  return s;
}

cplx psi_transform(const Measure1D& mu, cplx v) {
  const bool circle = mu.support_kind() == SupportKind::UnitCircleAngle;
  for (const auto& p : mu.atom_list()) {
    const cplx t = circle ? std::polar(1.0, p.location) : cplx(p.location);
    if (std::abs(t) > 0.0 && std::abs(v - 1.0 / t) <= 1e-12)
      throw PoleHit("psi_transform: v hits a reciprocal atom");
  }
  cplx s = 0.0;
  for (const auto& p : mu.atom_list()) {
    const cplx t = circle ? std::polar(1.0, p.location) : cplx(p.location);
    s += p.weight / (1.0 - v * t);
  }
  for (const auto& p : mu.quadrature()) {
    const cplx t = circle ? std::polar(1.0, p.location) : cplx(p.location);
    s += p.weight / (1.0 - v * t);
  }
  return s - 1.0;
}

double eta_over_v(const Measure1D& mu, double v) {
  if (v >= 0.0) throw DomainError("eta_over_v needs v < 0");
  if (mu.support_kind() != SupportKind::RealLine)
    throw UnsupportedMeasure("eta_over_v expects a real-line measure");
  if (mu.min_support() < -1e-12)
    throw DomainError("eta_over_v expects support in [0, inf)");
  // one plus psi = sum w/(1 - v t) stays strictly positive for v < 0
  double one_plus_psi = 0.0;
  for (const auto& p : mu.atom_list()) one_plus_psi += p.weight / (1.0 - v * p.location);
  for (const auto& p : mu.quadrature()) one_plus_psi += p.weight / (1.0 - v * p.location);
  const double psi = one_plus_psi - 1.0;
  const double eta = psi / one_plus_psi;
  return eta / v;
}

double invert_g(const Measure1D& mu, double target) {
  if (mu.is_point_mass())
    throw DomainError("invert_g: measure is a point mass, g is constant");
  const double m = mu.mean();
  if (!(target > 0.0) || target >= m)
    throw OutOfRange("invert_g: target must lie in (0, mean)");

  double hi = -1e-8;
  int guard = 0;
  while (eta_over_v(mu, hi) <= target) {
    hi *= 0.5;
    if (++guard > 200) throw OutOfRange("invert_g: target too close to the mean");
  }
  double lo = std::min(-1.0, 2.0 * hi);
  guard = 0;
  while (eta_over_v(mu, lo) >= target) {
    lo *= 2.0;
    if (++guard > 200) throw OutOfRange("invert_g: target at or below inf g");
  }

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eta_over_v(mu, mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace freebrown
