#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freebrown/errors.hpp"
#include "freebrown/measure.hpp"
#include "test_helpers.hpp"

using namespace freebrown;

TEST_CASE("measure invariants: weights and totals") {
  CHECK_THROWS_AS(Measure1D::atoms({{0.0, 0.5}, {1.0, 0.4}}), InvalidMeasure);
  CHECK_THROWS_AS(Measure1D::atoms({{0.0, -0.1}, {1.0, 1.1}}), InvalidMeasure);
  const auto mu = Measure1D::atoms({{0.0, 0.6}, {1.0, 0.4}});
  CHECK(mu.mean() == doctest::Approx(0.4));
  CHECK(mu.mass_at(0.0) == doctest::Approx(0.6));
}

TEST_CASE("preset means") {
  CHECK(Measure1D::semicircle(2.0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(Measure1D::free_poisson(1.0).mean() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(Measure1D::free_poisson(0.5).mean() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(Measure1D::uniform(0.0, 1.0).mean() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Measure1D::arcsine(2.0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  // quarter circle squares to free Poisson(1): second moment is 1
  const auto qc = Measure1D::quarter_circle(2.0);
  double second = 0.0;
  for (const auto& p : qc.quadrature()) second += p.weight * p.location * p.location;
  CHECK(second == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scalar_cauchy: atoms") {
  const auto delta0 = Measure1D::point_mass(0.0);
  CHECK(std::abs(scalar_cauchy(delta0, cplx(0, 1)) - cplx(0, -1)) < 1e-15);

  const auto bern = Measure1D::atoms({{-1.0, 0.5}, {1.0, 0.5}});
  const cplx z(0, 2);
  const cplx expect = 0.5 * (1.0 / (z + 1.0) + 1.0 / (z - 1.0));  // = -2i/5
  CHECK(std::abs(scalar_cauchy(bern, z) - expect) < 1e-15);
  CHECK(std::abs(expect - cplx(0, -0.4)) < 1e-15);
}

TEST_CASE("scalar_cauchy: semicircle closed form") {
  const auto sc = Measure1D::semicircle(2.0, 400);
  const cplx got = scalar_cauchy(sc, cplx(3.0, 0.0));
  const double expect = (3.0 - std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(got - expect) < 1e-4);  // spec tolerance; quadrature is far better
  CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("scalar_cauchy: upper half-plane maps to lower") {
  auto rng = fbtest::test_rng(17);
  const auto mu = Measure1D::free_poisson(1.0);
  for (int i = 0; i < 100; ++i) {
    const cplx z(fbtest::unif(rng, -5, 5), fbtest::unif(rng, 1e-3, 4));
    CHECK(scalar_cauchy(mu, z).imag() < 0.0);
  }
}

TEST_CASE("scalar_cauchy: rejects circle measures") {
  CHECK_THROWS_AS(scalar_cauchy(Measure1D::haar_unitary(), cplx(0, 2)), UnsupportedMeasure);
}

TEST_CASE("psi_transform: atoms and pole") {
  const auto d1 = Measure1D::point_mass(1.0);
  CHECK(std::abs(psi_transform(d1, cplx(0.5)) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(psi_transform(Measure1D::point_mass(0.0), cplx(0.7))) < 1e-15);
  CHECK_THROWS_AS(psi_transform(d1, cplx(1.0)), PoleHit);
}

TEST_CASE("psi_transform: free Poisson against dense quadrature oracle") {
  // psi(-1) for MP(1): solves p/(1+p)^2 = -1 with p in (-1, 0)
  const double expect = (-3.0 + std::sqrt(5.0)) / 2.0;
  const auto mu = Measure1D::free_poisson(1.0, 400);
  CHECK(psi_transform(mu, cplx(-1.0)).real() == doctest::Approx(expect).epsilon(1e-9));

  // brute force: dense 10^6-node quadrature built independently
  const int n = 1000000;
  double acc = 0.0;
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    const double theta = (i + 0.5) * pi / n;
    const double t = 2.0 * (1.0 + std::cos(theta));
    acc += (1.0 - std::cos(theta)) / pi * (pi / n) / (1.0 + t);
  }
  CHECK(psi_transform(mu, cplx(-1.0)).real() == doctest::Approx(acc - 1.0).epsilon(1e-6));
}

TEST_CASE("eta_over_v: point masses give constants") {
  const auto d1 = Measure1D::point_mass(1.0);
  CHECK(eta_over_v(d1, -1.0) == doctest::Approx(1.0));
  const auto dc = Measure1D::point_mass(3.7);
  for (double v : {-0.2, -1.0, -8.0}) CHECK(eta_over_v(dc, v) == doctest::Approx(3.7));
}

TEST_CASE("eta_over_v: limit at zero is the mean") {
  const auto mu = Measure1D::free_poisson(1.0);
  CHECK(eta_over_v(mu, -1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(eta_over_v(mu, 0.0), DomainError);
  CHECK_THROWS_AS(eta_over_v(mu, 0.5), DomainError);
}

TEST_CASE("eta_over_v: monotone on a negative grid") {
  const auto mu = Measure1D::free_poisson(1.0);
  double prev = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double v = -50.0 + i * 0.2495;  // up to ~ -0.1
    const double g = eta_over_v(mu, v);
    if (i > 0) CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("invert_g: forward-evaluation residuals") {
  const auto mu = Measure1D::free_poisson(1.0);
  const double v = invert_g(mu, 0.25);
  CHECK(std::abs(eta_over_v(mu, v) - 0.25) < 1e-10);
  // closed form for MP(1): g^{-1}(w) = (w-1)/w^2
  CHECK(v == doctest::Approx((0.25 - 1.0) / (0.25 * 0.25)).epsilon(1e-7));

  const auto uni = Measure1D::uniform(0.0, 1.0);
  const double vu = invert_g(uni, 0.4);
  CHECK(std::abs(eta_over_v(uni, vu) - 0.4) < 1e-10);
}

TEST_CASE("invert_g: rejects the boundary and inverts its own forward map") {
  const auto mu = Measure1D::uniform(0.0, 1.0);
  CHECK_THROWS_AS(invert_g(mu, mu.mean()), OutOfRange);
  CHECK_THROWS_AS(invert_g(mu, 0.9), OutOfRange);
  for (double v : {-0.3, -2.0, -20.0}) {
    const double target = eta_over_v(mu, v);
    CHECK(invert_g(mu, target) == doctest::Approx(v).epsilon(1e-8));
  }
}

TEST_CASE("quantiles: atoms plus quadrature") {
  const auto mu = Measure1D::atoms({{0.0, 0.5}, {2.0, 0.5}});
  const auto q = mu.quantiles(4);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == 0.0);
  CHECK(q[2] == 2.0);
  CHECK(q[3] == 2.0);
}

TEST_CASE("haar angles live on the circle") {
  const auto haar = Measure1D::haar_unitary(512);
  CHECK(haar.support_kind() == SupportKind::UnitCircleAngle);
  CHECK(haar.node_count() == 512);
  double total = 0.0;
  for (const auto& p : haar.quadrature()) {
    CHECK(p.location >= 0.0);
    CHECK(p.location < 2.0 * 3.14159265358979323846);
    total += p.weight;
  }
  CHECK(total == doctest::Approx(1.0));
}
