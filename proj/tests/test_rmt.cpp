#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "freebrown/errors.hpp"
#include "freebrown/rmt.hpp"
#include "test_helpers.hpp"

using namespace freebrown;

TEST_CASE("seed determinism: identical specs give bit-identical samples") {
  EnsembleSpec spec{TriangularEllipticKind{{1.0, 0.25, cplx(0.2, 0.1)}}, 60, 12345};
  const ComplexMatrix a = sample(spec);
  const ComplexMatrix b = sample(spec);
  REQUIRE(a.dim() == b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) CHECK(a(i, j) == b(i, j));

  EnsembleSpec other = spec;
  other.seed = 54321;
  const ComplexMatrix c = sample(other);
  CHECK((a - c).max_abs() > 0.0);
}

TEST_CASE("GUE scaling: alpha = beta = gamma gives an exactly hermitian matrix") {
  EnsembleSpec spec{TriangularEllipticKind{{1.0, 1.0, cplx(1.0)}}, 100, 7};
  const ComplexMatrix a = sample(spec);
  CHECK((a - a.adjoint()).max_abs() == 0.0);
}

TEST_CASE("sample covariances match the ensemble definition") {
  // N = 400, 100 samples, every entry-covariance class within 5 standard errors
  const int n = 400;
  const int reps = 100;
  const EllipticParams p{1.0, 0.25, cplx(0.2, 0.1)};

  double above = 0.0, below = 0.0, diag = 0.0;
  cplx pseudo = 0.0, cross_cova = 0.0;
  cplx pseudo_diag = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    EnsembleSpec spec{TriangularEllipticKind{p}, n, 1000 + static_cast<std::uint64_t>(rep)};
    const ComplexMatrix a = sample(spec);
    // average over a band of index pairs for sharp statistics
    for (int k = 0; k + 1 < n; k += 2) {
      const int i = k, j = k + 1;
      above += std::norm(a(i, j));
      below += std::norm(a(j, i));
      pseudo += a(i, j) * a(j, i);
      cross_cova += a(i, j) * std::conj(a(j, i));
      diag += std::norm(a(i, i));
      pseudo_diag += a(i, i) * a(i, i);
    }
  }
  const double pairs = reps * (n / 2.0);
  above /= pairs;
  below /= pairs;
  diag /= pairs;
  pseudo /= pairs;
  cross_cova /= pairs;
  pseudo_diag /= pairs;

  // variance of |g|^2-type estimators is ~ (value)^2 per sample
  const double se = 1.0 / std::sqrt(pairs);
  CHECK(std::abs(above - p.alpha / n) < 5.0 * se * (p.alpha / n) * 1.5);
  CHECK(std::abs(below - p.beta / n) < 5.0 * se * (p.beta / n) * 3.0);
  CHECK(std::abs(diag - 0.5 * (p.alpha + p.beta) / n) <
        5.0 * se * (0.5 * (p.alpha + p.beta) / n) * 3.0);
  CHECK(std::abs(pseudo - p.gamma / static_cast<double>(n)) < 5.0 * se / n * 3.0);
  CHECK(std::abs(cross_cova) < 5.0 * se / n * 3.0);
  CHECK(std::abs(pseudo_diag - p.gamma / static_cast<double>(n)) < 5.0 * se / n * 3.0);
}

TEST_CASE("upper-triangular-dominant ensemble kills the lower tail") {
  EnsembleSpec spec{TriangularEllipticKind{{1.0, 0.0, cplx(0.0)}}, 200, 99};
  const ComplexMatrix a = sample(spec);
  double below = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < i; ++j) below = std::max(below, std::abs(a(i, j)));
  CHECK(below == 0.0);
}

TEST_CASE("empirical_spectrum: diagonal and Jordan block") {
  const ComplexMatrix d = ComplexMatrix::diagonal({cplx(1.0), cplx(2.0), cplx(3.0)});
  auto eigs = empirical_spectrum(d);
  std::sort(eigs.begin(), eigs.end(),
            [](const cplx& a, const cplx& b) { return a.real() < b.real(); });
  CHECK(std::abs(eigs[0] - 1.0) < 1e-10);
  CHECK(std::abs(eigs[1] - 2.0) < 1e-10);
  CHECK(std::abs(eigs[2] - 3.0) < 1e-10);

  ComplexMatrix jordan(4);
  for (int i = 0; i + 1 < 4; ++i) jordan(i, i + 1) = 1.0;
  for (const cplx& e : empirical_spectrum(jordan)) {
    CHECK(std::abs(e) < 1e-2);  // defective eigenvalue, backward-stable accuracy
  }
}

TEST_CASE("empirical_spectrum: matches a known normal spectrum") {
  auto trng = fbtest::test_rng(3);
  const int n = 40;
  const ComplexMatrix u = fbtest::random_unitary(trng, n);
  std::vector<cplx> d(static_cast<std::size_t>(n));
  for (auto& v : d) v = cplx(fbtest::unif(trng, -2, 2), fbtest::unif(trng, -2, 2));
  const ComplexMatrix m = u * ComplexMatrix::diagonal(d) * u.adjoint();
  auto eigs = empirical_spectrum(m);
  // match the multisets by nearest pairing
  for (const cplx& target : d) {
    double best = 1e9;
    for (const cplx& e : eigs) best = std::min(best, std::abs(e - target));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("ginibre: circular law fractions") {
  EnsembleSpec spec{GinibreKind{}, 500, 2222};
  const auto eigs = empirical_spectrum(sample(spec));
  std::size_t inside = 0;
  for (const cplx& e : eigs) inside += (std::abs(e) <= 1.05) ? 1 : 0;
  CHECK(static_cast<double>(inside) / 500.0 >= 0.93);
}

TEST_CASE("biunitary sample has the prescribed singular values") {
  EnsembleSpec spec{BiunitaryKind{Measure1D::atoms({{1.0, 0.5}, {2.0, 0.5}})}, 64, 5};
  const ComplexMatrix a = sample(spec);
  // singular values of a are the sampled diagonal: check via a a^† spectrum
  const ComplexMatrix aat = a * a.adjoint();
  auto eigs = hermitian_eigenvalues(real_part(aat));
  for (double e : eigs) {
    const bool near1 = std::abs(e - 1.0) < 1e-8;
    const bool near4 = std::abs(e - 4.0) < 1e-8;
    CHECK((near1 || near4));
  }
}

TEST_CASE("polynomial ensemble: selfadjoint model gives hermitian samples") {
  PolynomialKind kind;
  kind.poly = NCPolynomial::variable(1);
  kind.models[1] = VariableModel::selfadjoint(Measure1D::semicircle(2.0, 200));
  EnsembleSpec spec{kind, 80, 31};
  const ComplexMatrix a = sample(spec);
  CHECK((a - a.adjoint()).max_abs() < 1e-12);
  // spectrum concentrates in [-2, 2]
  const auto eigs = empirical_spectrum(a);
  for (const cplx& e : eigs) {
    CHECK(std::abs(e.imag()) < 1e-8);
    CHECK(std::abs(e.real()) < 2.01);
  }
}

TEST_CASE("haar unitary samples are unitary") {
  Rng rng(77);
  const ComplexMatrix u = haar_unitary_matrix(50, rng);
  const ComplexMatrix uu = u * u.adjoint();
  CHECK((uu - ComplexMatrix::identity(50)).max_abs() < 1e-12);
}

TEST_CASE("compare: identity spectrum against a delta-peak grid") {
  // predicted grid: peak of mass 1 at lambda = 1
  DensityGrid dg;
  dg.grid = LambdaGrid{0.0, 2.0, -1.0, 1.0, 21, 21};
  dg.epsilon = 1e-3;
  const std::size_t n = dg.grid.size();
  dg.g_values.assign(n, 0.0);
  dg.g11_values.assign(n, 0.0);
  dg.density.assign(n, 0.0);
  dg.converged.assign(n, 1);
  const std::size_t center = dg.grid.index(10, 10);  // lambda = 1
  dg.density[center] = 1.0 / (dg.grid.hx() * dg.grid.hy());
  dg.total_mass = 1.0;

  std::vector<cplx> eigs(200, cplx(1.0, 0.0));
  const CompareReport rep = compare(eigs, dg);
  CHECK(rep.frac_inside_support == 1.0);
  CHECK(rep.l1_histogram < 1e-9);
}

TEST_CASE("compare: grid mismatch detection") {
  DensityGrid dg;
  dg.grid = LambdaGrid{-1.0, 1.0, -1.0, 1.0, 11, 11};
  const std::size_t n = dg.grid.size();
  dg.density.assign(n, 0.0);
  dg.converged.assign(n, 1);
  dg.g_values.assign(n, 0.0);
  dg.g11_values.assign(n, 0.0);
  std::vector<cplx> eigs(150, cplx(5.0, 0.0));
  CHECK_THROWS_AS(compare(eigs, dg), GridMismatch);
  std::vector<cplx> few(10, cplx(0.0));
  CHECK_THROWS_AS(compare(few, dg), DomainError);
}

TEST_CASE("triangular-elliptic covariance stays PSD or throws") {
  // |gamma| <= sqrt(alpha beta) enforced upstream by validate()
  EnsembleSpec bad{TriangularEllipticKind{{1.0, 0.1, cplx(0.9, 0.0)}}, 10, 3};
  CHECK_THROWS_AS(sample(bad), DegenerateParams);
}
