#pragma once

#include <vector>

#include "freebrown/complex_matrix.hpp"
#include "freebrown/ovcauchy.hpp"

namespace freebrown {

struct SolverOptions {
  /// Frobenius norm of successive damped iterates at which to stop.
  double tol = 1e-11;
  /// Allowed two-sided residual ||G1(w1) - G2(w2)|| at an accepted solution.
  double consistency_tol = 1e-9;
  int max_iter = 2000;
  /// Under-relaxation factor; halved whenever the residual grows.
  double damping = 0.5;
  bool memoize = true;
};

/// Output of one operator-valued free additive convolution.
struct SubordResult {
  ComplexMatrix omega1;
  ComplexMatrix omega2;
  ComplexMatrix g_sum;
  int iterations = 0;
  double residual = 0.0;          // final successive-iterate distance
  double consistency = 0.0;       // ||G1(w1) - G2(w2)||_F
  double prime_residual = 0.0;    // ||w1 + w2 - b - g_sum^{-1}||_F
};

/// Free additive convolution of the two transforms at b (Im b > 0), via the
/// damped fixed point of w -> b + h1(b + h2(w)) with h_j(w) = G_j(w)^{-1} - w.
/// Then omega1 = b + h2(omega2) and g_sum = G1(omega1) = G2(omega2)
/// = (omega1 + omega2 - b)^{-1}.
///
/// `initial` optionally warm-starts the iteration (it is used only when it
/// lies safely inside the half-plane).
SubordResult free_add(CauchyOracle& c1, CauchyOracle& c2, const ComplexMatrix& b,
                      const SolverOptions& opts, const ComplexMatrix* initial = nullptr);

/// Left-associated fold of free_add over k transforms; the partial sums act
/// as memoized oracles for the next stage.  For a single oracle this is just
/// its transform.
ComplexMatrix fold_sum(const std::vector<CauchyOracle*>& oracles, const ComplexMatrix& b,
                       const SolverOptions& opts);

/// Same fold, but also reports the diagnostics of the outermost solve
/// (iterations = 0 and zero residuals when only one oracle is given).
struct FoldResult {
  ComplexMatrix g;
  int iterations = 0;
  double residual = 0.0;
  double consistency = 0.0;
  double prime_residual = 0.0;
};
FoldResult fold_sum_detailed(const std::vector<CauchyOracle*>& oracles,
                             const ComplexMatrix& b, const SolverOptions& opts,
                             const ComplexMatrix* initial = nullptr,
                             ComplexMatrix* final_omega2 = nullptr);

}  // namespace freebrown
