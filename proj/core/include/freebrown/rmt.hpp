#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <variant>
#include <vector>

#include "freebrown/brown.hpp"
#include "freebrown/complex_matrix.hpp"
#include "freebrown/elliptic.hpp"
#include "freebrown/measure.hpp"
#include "freebrown/ncpoly.hpp"
#include "freebrown/ovcauchy.hpp"

namespace freebrown {

/// Seeded generator: the mt19937_64 stream (bit-exact per the standard) with
/// hand-rolled uniform and Box-Muller mappings, so samples do not depend on
/// unspecified distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1].
  double uniform();
  double gaussian();
  /// Standard complex gaussian with E|z|^2 = 1.
  cplx complex_gaussian();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct TriangularEllipticKind {
  EllipticParams params;
};
struct GinibreKind {};
struct BiunitaryKind {
  Measure1D singular_values;  // law of the singular values
};
struct PolynomialKind {
  NCPolynomial poly;
  ModelMap models;
};

/// Which ensemble to draw and at what size/seed.  Identical specs produce
/// bit-identical samples.
struct EnsembleSpec {
  std::variant<TriangularEllipticKind, GinibreKind, BiunitaryKind, PolynomialKind> kind;
  int n = 2;
  std::uint64_t seed = 1;
};

ComplexMatrix sample(const EnsembleSpec& spec);

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix.
ComplexMatrix haar_unitary_matrix(int n, Rng& rng);

/// All eigenvalues with multiplicity (LAPACK zgeev; retried under a random
/// unitary similarity once before giving up).
std::vector<cplx> empirical_spectrum(const ComplexMatrix& m);

struct CompareReport {
  double l1_histogram = 0.0;
  double frac_inside_support = 0.0;
  std::size_t n_eigenvalues = 0;
  std::size_t n_outside_grid = 0;
};

/// Bins eigenvalues on the predicted grid: l1 distance between the empirical
/// cell histogram and the predicted density, and the fraction of eigenvalues
/// within the predicted support dilated by `margin`.
CompareReport compare(const std::vector<cplx>& eigs, const DensityGrid& predicted,
                      double margin = 0.05);

}  // namespace freebrown
