#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "freebrown/linearization.hpp"
#include "freebrown/subord.hpp"

namespace freebrown {

using ModelMap = std::map<int, VariableModel>;

/// Rectangular lambda grid; nodes at re_min + ix*hx, im_min + iy*hy,
/// indexed row-major as iy*nx + ix.
struct LambdaGrid {
  double re_min = -1.0, re_max = 1.0;
  double im_min = -1.0, im_max = 1.0;
  int nx = 3, ny = 3;

  double hx() const { return (re_max - re_min) / (nx - 1); }
  double hy() const { return (im_max - im_min) / (ny - 1); }
  cplx node(int ix, int iy) const { return {re_min + ix * hx(), im_min + iy * hy()}; }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  void validate() const;
};

/// Corner entries of the pencil transform at one lambda.
struct CornerValues {
  cplx g21, g11, g12, g22;
  int iterations = 0;
  double residual = 0.0;
  double consistency = 0.0;
  double prime_residual = 0.0;
};

/// Evaluates the operator-valued transform of the pencil at
/// b = Lambda_eps (x) e_11 + i*delta off the corner, where
/// Lambda_eps = [[i*eps, lambda], [conj(lambda), i*eps]], and returns the
/// corner entries.  g21 approximates the regularized Cauchy transform
/// of the polynomial at lambda; g11 feeds the atom diagnostics.
CornerValues corner_transform(const Linearization& l, const ModelMap& models, cplx lambda,
                              double eps, double delta, const SolverOptions& opts,
                              ComplexMatrix* warm_omega2 = nullptr);

/// Grid of regularized Brown-measure data at a fixed epsilon.
struct DensityGrid {
  LambdaGrid grid;
  double epsilon = 0.0;
  std::vector<cplx> g_values;    // g21 per node
  std::vector<cplx> g11_values;  // g11 per node
  std::vector<double> density;   // (1/pi) Re d(g21)/d(conj lambda)
  std::vector<char> converged;   // per node
  double total_mass = 0.0;
  // worst subordination residuals over the converged nodes
  double max_consistency = 0.0;
  double max_prime_residual = 0.0;

  std::size_t converged_count() const;
  /// CSV rows re_lambda,im_lambda,epsilon,g_re,g_im,g11_re,g11_im,density,converged
  void write_csv(std::ostream& os) const;
};

enum class DensityMethod {
  Wirtinger,          // (1/pi) d/d(conj lambda) of g21, finite differences
  LaplacianLogDet     // debug cross-check through the log-determinant
};

struct GridOptions {
  SolverOptions solver;
  double delta_factor = 0.01;  // delta = delta_factor * eps
  int workers = 1;
  DensityMethod method = DensityMethod::Wirtinger;
  /// Nodes failing to converge are flagged and skipped, up to this fraction.
  double max_failure_fraction = 1.0;
};

/// Full sweep: corner transform on every node, then the Wirtinger finite
/// difference for the density.  Unconverged nodes are flagged and excluded
/// from total_mass.
DensityGrid density_grid(const Linearization& l, const ModelMap& models,
                         const LambdaGrid& grid, double eps, const GridOptions& opts);

/// Density at a single lambda from a 4-point cross stencil of width h.
double density_at(const Linearization& l, const ModelMap& models, cplx lambda, double eps,
                  double h, const GridOptions& opts);

struct SweepResult {
  std::vector<cplx> values;   // g21 at each epsilon, descending schedule
  cplx at_smallest;           // value at the last (smallest) epsilon
  cplx richardson;            // extrapolated limit from the last three values
  bool stable = true;         // false when successive differences grow
};

/// g21 along a strictly decreasing epsilon schedule (>= 3 entries) with a
/// Richardson estimate of the eps -> 0 limit and a stability flag.
SweepResult epsilon_sweep(const Linearization& l, const ModelMap& models, cplx lambda,
                          const std::vector<double>& eps_schedule, const GridOptions& opts);

struct AtomEstimate {
  double mass = 0.0;                 // extrapolated i*eps*g11 as eps -> 0
  std::vector<double> values;        // i*eps*g11 per epsilon
  double offdiag_at_smallest = 0.0;  // |i*eps*g21| at the smallest epsilon
};

/// Brown-measure atom mass at lambda via the eps^2-weighted resolvent trace.
AtomEstimate atom_mass_detailed(const Linearization& l, const ModelMap& models, cplx lambda,
                                const std::vector<double>& eps_schedule,
                                const GridOptions& opts);
double atom_mass(const Linearization& l, const ModelMap& models, cplx lambda,
                 const std::vector<double>& eps_schedule, const GridOptions& opts);

/// Default epsilon schedule {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}.
std::vector<double> default_eps_schedule();

}  // namespace freebrown
