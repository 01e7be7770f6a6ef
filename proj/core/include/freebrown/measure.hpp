#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace freebrown {

using cplx = std::complex<double>;

enum class SupportKind {
  RealLine,        // nodes are points t on the real line
  UnitCircleAngle  // nodes are angles theta in [0, 2*pi), the variable is e^{i*theta}
};

/// Probability measure on the real line or on the unit circle, represented
/// as atoms plus quadrature nodes.  Immutable after construction.
class Measure1D {
 public:
  struct Weighted {
    double location = 0.0;
    double weight = 0.0;
  };

  Measure1D(std::vector<Weighted> atoms, std::vector<Weighted> quadrature,
            SupportKind kind);

  // -- named presets ---------------------------------------------------

  /// Pure atomic measure sum w_i * delta_{t_i}.
  static Measure1D atoms(std::vector<Weighted> atoms,
                         SupportKind kind = SupportKind::RealLine);
  static Measure1D point_mass(double location,
                              SupportKind kind = SupportKind::RealLine);
  /// Semicircle of radius r (variance r^2/4), Chebyshev-type nodes.
  static Measure1D semicircle(double radius, int nodes = 400);
  /// Free Poisson (Marchenko-Pastur) with rate lambda > 0; carries the
  /// (1-lambda) atom at zero when lambda < 1.
  static Measure1D free_poisson(double lambda, int nodes = 400);
  static Measure1D uniform(double a, double b, int nodes = 400);
  /// Arcsine law on [-radius, radius].
  static Measure1D arcsine(double radius, int nodes = 400);
  /// Positive square root of a free Poisson(1) variable; support [0, radius].
  static Measure1D quarter_circle(double radius = 2.0, int nodes = 400);
  /// Uniform angle grid on [0, 2*pi): spectral measure of a Haar unitary.
  static Measure1D haar_unitary(int nodes = 512);

  const std::vector<Weighted>& atom_list() const { return atoms_; }
  const std::vector<Weighted>& quadrature() const { return quad_; }
  SupportKind support_kind() const { return kind_; }

  std::size_t node_count() const { return atoms_.size() + quad_.size(); }
  double mean() const;
  double min_support() const;
  double max_support() const;
  double mass_at(double location, double tol = 1e-12) const;
  bool is_point_mass(double tol = 1e-12) const;
  /// At least two distinct support points.
  bool has_spread(double tol = 1e-12) const;

  /// n quantile samples at levels (i + 0.5)/n, ascending.
  std::vector<double> quantiles(int n) const;

 private:
  std::vector<Weighted> atoms_;
  std::vector<Weighted> quad_;
  SupportKind kind_;
};

/// Sum w_i / (z - t_i) over all support points of a real-line measure.
/// Maps the upper half-plane into the lower one.
cplx scalar_cauchy(const Measure1D& mu, cplx z);

/// psi(v) = sum w_i / (1 - v * t_i) - 1 (the moment generating series).
cplx psi_transform(const Measure1D& mu, cplx v);

/// g(v) = eta(v) / v with eta = psi / (1 + psi); defined for v < 0 on
/// measures supported in [0, inf).  Strictly increasing with
/// g(0^-) = mean(mu) whenever mu is not a point mass.
double eta_over_v(const Measure1D& mu, double v);

/// Solves g(v) = target for v < 0 by bracketed bisection.
double invert_g(const Measure1D& mu, double target);

}  // namespace freebrown
