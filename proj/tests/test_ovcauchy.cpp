#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freebrown/errors.hpp"
#include "freebrown/ovcauchy.hpp"
#include "test_helpers.hpp"

using namespace freebrown;

namespace {

// hermitized summand [[0, x], [x, 0]] for a selfadjoint variable
Summand hermitized(const Measure1D& law) {
  ComplexMatrix e(2);
  e(0, 1) = 1.0;
  return Summand(2, ComplexMatrix(2), e, VariableModel::selfadjoint(law));
}

Summand hermitized_haar(int nodes = 512) {
  ComplexMatrix e(2);
  e(0, 1) = 1.0;
  return Summand(2, ComplexMatrix(2), e, VariableModel::haar_unitary(nodes));
}

}  // namespace

TEST_CASE("ov_cauchy: zero variable returns b^{-1}") {
  const Summand s = hermitized(Measure1D::point_mass(0.0));
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0, 1), cplx(0, 1)});
  const ComplexMatrix g = ov_cauchy(s, b);
  CHECK((g - ComplexMatrix::diagonal({cplx(0, -1), cplx(0, -1)})).max_abs() < 1e-14);
}

TEST_CASE("ov_cauchy: semicircle reduces to the scalar transform on the diagonal") {
  const Summand s = hermitized(Measure1D::semicircle(2.0, 400));
  const cplx z(0.0, 3.0);
  const ComplexMatrix b = ComplexMatrix::diagonal({z, z});
  const ComplexMatrix g = ov_cauchy(s, b);
  const cplx expect = fbtest::semicircle_g(z, 2.0);
  CHECK(std::abs(g(0, 0) - expect) < 1e-6);
  CHECK(std::abs(g(1, 1) - expect) < 1e-6);
  CHECK(std::abs(g(0, 1)) < 1e-12);
}

TEST_CASE("ov_cauchy: Haar unitary against a dense trapezoid oracle") {
  const Summand s = hermitized_haar(512);
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0, 2), cplx(0, 2)});
  const ComplexMatrix g = ov_cauchy(s, b);

  // 10^6-point trapezoid for the (0,0) entry of the inverse
  const int n = 1000000;
  cplx acc = 0.0;
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    const double theta = two_pi * i / n;
    const cplx z(0, 2);
    // [[z, -e^{i t}], [-e^{-i t}, z]]^{-1} upper-left entry is z/(z^2 - 1)
    const cplx det = z * z - 1.0;
    acc += z / det / static_cast<double>(n);
    (void)theta;
  }
  CHECK(std::abs(g(0, 0) - acc) < 1e-8);
  CHECK(std::abs(g(0, 0) - cplx(0, -0.4)) < 1e-10);  // 2i/((2i)^2-1)
  CHECK(std::abs(g(0, 1)) < 1e-12);
}

TEST_CASE("ov_cauchy: precondition on Im b") {
  const Summand s = hermitized(Measure1D::semicircle(2.0));
  ComplexMatrix bad = ComplexMatrix::diagonal({cplx(0, 1), cplx(0, -0.1)});
  CHECK_THROWS_AS(ov_cauchy(s, bad), NotInUpperHalfPlane);
}

TEST_CASE("ov_F: identity map for the zero variable") {
  const Summand s = hermitized(Measure1D::point_mass(0.0));
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0, 1), cplx(0, 1)});
  CHECK((ov_F(s, b) - b).max_abs() < 1e-13);
}

TEST_CASE("ov_F: scalar closed form for the semicircle") {
  const Summand s = hermitized(Measure1D::semicircle(2.0, 400));
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0, 3), cplx(0, 3)});
  const ComplexMatrix f = ov_F(s, b);
  const cplx expect = 1.0 / fbtest::semicircle_g(cplx(0, 3), 2.0);
  CHECK(std::abs(f(0, 0) - expect) < 1e-6);
  CHECK(imag_part(f)(0, 0).real() >= 3.0 - 1e-9);
}

TEST_CASE("half-plane mapping over random arguments") {
  auto rng = fbtest::test_rng(314);
  const Summand bern = hermitized(Measure1D::atoms({{-1.0, 0.5}, {1.0, 0.5}}));
  const Summand sc = hermitized(Measure1D::semicircle(2.0, 200));
  const Summand haar = hermitized_haar(256);
  for (const Summand* s : {&bern, &sc, &haar}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix b = fbtest::random_upper_half(rng, 2, 0.1, 3.0);
      const ComplexMatrix g = (*s).coeff.dim() ? ov_cauchy(*s, b) : ComplexMatrix(2);
      CHECK(min_eig_hermitian(cplx(-1.0) * imag_part(g)) > -1e-10);
      const ComplexMatrix f = ov_F(*s, b);
      CHECK(min_eig_hermitian(imag_part(f) - imag_part(b)) >= -1e-9);
    }
  }
}

TEST_CASE("asymptotics: z G(i z I) approaches the identity") {
  const Summand s = hermitized(Measure1D::semicircle(2.0, 400));
  for (double z : {1e3, 1e4}) {
    const ComplexMatrix b = ComplexMatrix::scaled_identity(2, cplx(0, z));
    ComplexMatrix zg = ov_cauchy(s, b);
    zg *= cplx(0, z);
    CHECK((zg - ComplexMatrix::identity(2)).frobenius_norm() <= 10.0 / z);
  }
}

TEST_CASE("quadrature convergence: doubling nodes is inert at smooth presets") {
  const Summand coarse = hermitized(Measure1D::semicircle(2.0, 400));
  const Summand fine = hermitized(Measure1D::semicircle(2.0, 800));
  auto rng = fbtest::test_rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix b = fbtest::random_upper_half(rng, 2, 0.1, 2.0);
    const ComplexMatrix d = ov_cauchy(coarse, b) - ov_cauchy(fine, b);
    CHECK(d.frobenius_norm() < 1e-8);
  }
}

TEST_CASE("constant-only summand ignores the variable") {
  ComplexMatrix c(2);
  c(0, 0) = 1.0;
  c(1, 1) = -1.0;
  const Summand s(2, c, ComplexMatrix(2),
                  VariableModel::selfadjoint(Measure1D::point_mass(0.0)));
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0, 2), cplx(0, 2)});
  const ComplexMatrix g = ov_cauchy(s, b);
  CHECK(std::abs(g(0, 0) - 1.0 / (cplx(0, 2) - 1.0)) < 1e-14);
  CHECK(std::abs(g(1, 1) - 1.0 / (cplx(0, 2) + 1.0)) < 1e-14);
}
