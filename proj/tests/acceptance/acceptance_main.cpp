// Acceptance suite: runs every numbered criterion end to end and prints one
// pass/fail line each.  Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "freebrown/brown.hpp"
#include "freebrown/elliptic.hpp"
#include "freebrown/errors.hpp"
#include "freebrown/poly_parser.hpp"
#include "freebrown/rdiag.hpp"
#include "freebrown/rmt.hpp"
#include "test_helpers.hpp"

using namespace freebrown;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

ModelMap two_semicircles(int nodes = 400) {
  ModelMap m;
  m[1] = VariableModel::selfadjoint(Measure1D::semicircle(2.0, nodes));
  m[2] = VariableModel::selfadjoint(Measure1D::semicircle(2.0, nodes));
  return m;
}

const char* kCircularPoly = "0.7071067811865476*x1 + (0.7071067811865476i)*x2";

// shared state between criteria 1 and 9
DensityGrid g_circular_grid;
bool g_have_circular_grid = false;

// ---------------------------------------------------------------- criteria

Check criterion1() {
  Check c;
  const double t0 = now_seconds();
  const Linearization lin = linearize_polynomial(parse_polynomial(kCircularPoly));
  const ModelMap models = two_semicircles();
  LambdaGrid grid{-1.5, 1.5, -1.5, 1.5, 101, 101};
  GridOptions opts;
  opts.workers = 1;  // the runtime bound is single-threaded
  opts.solver.max_iter = 6000;
  const DensityGrid dg = density_grid(lin, models, grid, 1e-3, opts);
  const double elapsed = now_seconds() - t0;

  const double inv_pi = 1.0 / kPi;
  double worst_in = 0.0, worst_out = 0.0;
  std::size_t unconverged_checked = 0;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      const double r = std::abs(grid.node(ix, iy));
      if (r <= 0.85) {
        if (!dg.converged[k]) {
          ++unconverged_checked;
          continue;
        }
        worst_in = std::max(worst_in, std::abs(dg.density[k] - inv_pi));
      } else if (r >= 1.15) {
        if (!dg.converged[k]) {
          ++unconverged_checked;
          continue;
        }
        worst_out = std::max(worst_out, std::abs(dg.density[k]));
      }
    }
  }
  c.require(unconverged_checked == 0, "unconverged nodes inside the asserted regions");
  c.require(worst_in <= 0.1 * inv_pi, "bulk density deviates by " + fmt(worst_in));
  c.require(worst_out < 0.02, "outside density " + fmt(worst_out));
  c.require(dg.total_mass >= 0.95 && dg.total_mass <= 1.02,
            "total mass " + fmt(dg.total_mass));
  c.require(elapsed <= 600.0, "runtime " + fmt(elapsed) + "s exceeds 10 min");
  c.note("mass " + fmt(dg.total_mass) + ", bulk dev " + fmt(worst_in) + ", outside " +
         fmt(worst_out) + ", " + fmt(elapsed) + "s");

  g_circular_grid = dg;
  g_have_circular_grid = true;
  return c;
}

Check criterion2() {
  Check c;
  const Linearization lin = linearize_polynomial(parse_polynomial(kCircularPoly));
  const ModelMap models = two_semicircles();
  const EllipticParams circ{1.0, 1.0, cplx(0.0)};
  SolverOptions solver;
  double worst = 0.0;
  std::mt19937_64 rng(20240601);
  for (int k = 0; k < 64; ++k) {
    const double r = 0.8 * std::sqrt(fbtest::unif(rng, 0.0, 1.0));
    const double theta = fbtest::unif(rng, 0.0, 2.0 * kPi);
    const cplx lambda = std::polar(r, theta);
    const CornerValues v = corner_transform(lin, models, lambda, 1e-3, 0.0, solver);
    worst = std::max(worst, std::abs(v.g21 - elliptic_cauchy(circ, lambda)));
  }
  c.require(worst <= 1e-2, "max transform gap " + fmt(worst));
  c.note("max |G_pipeline - G_elliptic| = " + fmt(worst));
  return c;
}

Check criterion3() {
  Check c;
  // quadrature resolution is a config tunable; the 1e-6 target at r = 0.1
  // needs the boundary layer near t = 0 resolved
  const RDiagonalSpec poisson(Measure1D::free_poisson(1.0, 2000));
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double r = 0.1 * i;
    worst = std::max(worst, std::abs(radial_cdf(poisson, r) - r * r));
  }
  c.require(worst <= 1e-6, "free Poisson CDF deviates by " + fmt(worst));

  const RDiagonalSpec haar(Measure1D::point_mass(1.0));
  c.require(radial_cdf(haar, 0.999) == 0.0, "Haar CDF not 0 below the circle");
  c.require(radial_cdf(haar, 1.0) == 1.0, "Haar CDF not 1 at the circle");
  c.require(radial_cdf(haar, 1.001) == 1.0, "Haar CDF not 1 above the circle");
  c.note("max |cdf - r^2| = " + fmt(worst));
  return c;
}

Check criterion4() {
  Check c;
  const Linearization lin = linearize_polynomial(parse_polynomial("x1*x2"));
  ModelMap models;
  models[1] = VariableModel::haar_unitary(512);
  models[2] = VariableModel::selfadjoint(Measure1D::quarter_circle(2.0, 400));
  const RDiagonalSpec spec(Measure1D::free_poisson(1.0, 400));
  GridOptions opts;
  opts.solver.max_iter = 6000;

  double worst = 0.0;
  for (int i = 0; i <= 12; ++i) {
    const double r = 0.2 + 0.05 * i;
    for (double theta : {0.0, 2.0 * kPi / 3.0}) {
      const cplx lambda = std::polar(r, theta);
      const double pipeline = density_at(lin, models, lambda, 1e-3, 1e-3, opts);
      const double closed = radial_density(spec, r);
      worst = std::max(worst, std::abs(pipeline - closed));
    }
  }
  c.require(worst <= 0.02, "radial density gap " + fmt(worst));
  c.note("sup |pipeline - closed form| = " + fmt(worst));
  return c;
}

Check criterion5() {
  Check c;
  const Linearization lin = linearize_polynomial(parse_polynomial("x1 + x2"));
  const ModelMap models = two_semicircles();
  SolverOptions solver;
  solver.max_iter = 20000;
  double worst = 0.0;
  for (double lambda : {0.0, 1.0, -1.0, 2.0, -2.0}) {
    const CornerValues v = corner_transform(lin, models, cplx(lambda, 0.0), 1e-4, 0.0, solver);
    // Hilbert transform of the semicircle of radius 2*sqrt(2) is lambda/4
    worst = std::max(worst, std::abs(v.g21.real() - lambda / 4.0));
    c.require(v.consistency <= 1e-8, "consistency residual " + fmt(v.consistency));
  }
  c.require(worst <= 1e-3, "Hilbert transform gap " + fmt(worst));
  c.note("max |Re g21 - lambda/4| = " + fmt(worst));
  return c;
}

Check criterion6() {
  Check c;
  const Linearization lin = linearize_polynomial(parse_polynomial("x1 + x2"));
  // 0.6 atom at zero plus uniform([1,2]) carrying the remaining 0.4
  std::vector<Measure1D::Weighted> quad = Measure1D::uniform(1.0, 2.0, 400).quadrature();
  for (auto& p : quad) p.weight *= 0.4;
  const Measure1D mixed({{0.0, 0.6}}, quad, SupportKind::RealLine);
  ModelMap models;
  models[1] = VariableModel::selfadjoint(mixed);
  models[2] = VariableModel::selfadjoint(mixed);
  GridOptions opts;
  opts.solver.max_iter = 40000;
  const AtomEstimate est =
      atom_mass_detailed(lin, models, cplx(0.0, 0.0), {1e-2, 3e-3, 1e-3, 3e-4}, opts);
  c.require(std::abs(est.mass - 0.2) <= 0.02, "atom mass " + fmt(est.mass));
  c.require(est.offdiag_at_smallest <= 0.05,
            "off-diagonal limit " + fmt(est.offdiag_at_smallest));
  c.note("atom mass " + fmt(est.mass) + ", offdiag " + fmt(est.offdiag_at_smallest));
  return c;
}

Check criterion7() {
  Check c;
  const EllipticParams params{1.0, 0.25, cplx(0.2, 0.0)};

  // predicted density grid from the closed form, bounding box with margin
  const double a = std::sqrt(boundary_radius_sq(params, 0.0));
  const double b = std::sqrt(boundary_radius_sq(params, kPi / 2.0));
  LambdaGrid grid;
  grid.re_min = -(a + 0.25);
  grid.re_max = a + 0.25;
  grid.im_min = -(b + 0.25);
  grid.im_max = b + 0.25;
  grid.nx = 27;
  grid.ny = 15;
  DensityGrid predicted;
  predicted.grid = grid;
  predicted.epsilon = 0.0;
  predicted.g_values.assign(grid.size(), 0.0);
  predicted.g11_values.assign(grid.size(), 0.0);
  predicted.converged.assign(grid.size(), 1);
  predicted.density.resize(grid.size());
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      predicted.density[grid.index(ix, iy)] = elliptic_density(params, grid.node(ix, iy));

  double worst_l1 = 0.0, worst_frac = 1.0, worst_time = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double t0 = now_seconds();
    EnsembleSpec spec{TriangularEllipticKind{params}, 2000, seed};
    const auto eigs = empirical_spectrum(sample(spec));
    const CompareReport rep = compare(eigs, predicted, 0.05);
    const double elapsed = now_seconds() - t0;
    worst_l1 = std::max(worst_l1, rep.l1_histogram);
    worst_frac = std::min(worst_frac, rep.frac_inside_support);
    worst_time = std::max(worst_time, elapsed);
  }
  c.require(worst_frac >= 0.98, "frac inside " + fmt(worst_frac));
  c.require(worst_l1 <= 0.15, "l1 histogram " + fmt(worst_l1));
  c.require(worst_time <= 300.0, "per-seed runtime " + fmt(worst_time) + "s");
  c.note("min frac " + fmt(worst_frac) + ", max l1 " + fmt(worst_l1) + ", max seed time " +
         fmt(worst_time) + "s");
  return c;
}

Check criterion8() {
  Check c;
  std::mt19937_64 rng(0xACCE55);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    // random polynomial: degree <= 4, <= 3 variables, 1..4 monomials
    const int vars = 1 + static_cast<int>(rng() % 3);
    const int n_monomials = 1 + static_cast<int>(rng() % 4);
    std::vector<Monomial> monomials;
    for (int m = 0; m < n_monomials; ++m) {
      const int degree = 1 + static_cast<int>(rng() % 4);
      Word word;
      for (int d = 0; d < degree; ++d)
        word.push_back({1 + static_cast<int>(rng() % static_cast<unsigned>(vars)),
                        (rng() % 2) == 0});
      monomials.push_back({cplx(fbtest::unif(rng, -2, 2), fbtest::unif(rng, -2, 2)), word});
    }
    NCPolynomial p(monomials);
    if (p.empty() || p.variable_count() < vars) {
      --trial;
      continue;
    }
    const Linearization lin = linearize_polynomial(p);

    std::vector<ComplexMatrix> subst;
    for (int v = 0; v < vars; ++v) subst.push_back(fbtest::random_hermitian(rng, 8));
    ComplexMatrix b = fbtest::random_hermitian(rng, 2);
    b(0, 0) += cplx(0.0, 0.4 + fbtest::unif(rng, 0, 1));
    b(1, 1) += cplx(0.0, 0.4 + fbtest::unif(rng, 0, 1));

    // corner of (b1 - L(subst))^{-1} against the direct hermitized resolvent
    const int n = 8;
    const int big = lin.dim * n;
    ComplexMatrix b1(big);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int t = 0; t < n; ++t) b1(i * n + t, j * n + t) = b(i, j);
    const ComplexMatrix big_inv = invert(b1 - lin.evaluate(subst));

    const ComplexMatrix pm = evaluate_poly(p, subst);
    ComplexMatrix herm(2 * n);
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        herm(r, n + s) = pm(r, s);
        herm(n + r, s) = std::conj(pm(s, r));
      }
    ComplexMatrix b_small(2 * n);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int t = 0; t < n; ++t) b_small(i * n + t, j * n + t) = b(i, j);
    const ComplexMatrix small_inv = invert(b_small - herm);

    double gap = 0.0;
    for (int r = 0; r < 2 * n; ++r)
      for (int s = 0; s < 2 * n; ++s) gap = std::max(gap, std::abs(big_inv(r, s) - small_inv(r, s)));
    worst = std::max(worst, gap);
  }
  c.require(worst <= 1e-9, "corner residual " + fmt(worst));
  c.note("max corner residual " + fmt(worst));
  return c;
}

Check criterion9() {
  Check c;

  // half-plane mapping of G and F across the variable models
  {
    std::mt19937_64 rng(4321);
    std::vector<Summand> summands;
    ComplexMatrix e(2);
    e(0, 1) = 1.0;
    summands.emplace_back(2, ComplexMatrix(2), e,
                          VariableModel::selfadjoint(Measure1D::semicircle(2.0, 200)));
    summands.emplace_back(2, ComplexMatrix(2), e,
                          VariableModel::selfadjoint(Measure1D::atoms({{-1.0, 0.5}, {1.0, 0.5}})));
    summands.emplace_back(2, ComplexMatrix(2), e, VariableModel::haar_unitary(256));
    double worst_g = 0.0, worst_f = 0.0;
    for (const Summand& s : summands) {
      for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix b = fbtest::random_upper_half(rng, 2, 0.1, 3.0);
        const ComplexMatrix g = ov_cauchy(s, b);
        // largest eigenvalue of Im G must stay at or below zero
        const double top = -min_eig_hermitian(cplx(-1.0) * imag_part(g));
        worst_g = std::max(worst_g, top);
        const ComplexMatrix f = ov_F(s, b);
        const double fdef = min_eig_hermitian(imag_part(f) - imag_part(b));
        worst_f = std::max(worst_f, -fdef);
      }
    }
    c.require(worst_g <= 1e-10, "Im G above zero by " + fmt(worst_g));
    c.require(worst_f <= 1e-9, "Im F below Im b by " + fmt(worst_f));
  }

  // subordination residuals on the accepted grid nodes of criterion 1
  if (g_have_circular_grid) {
    c.require(g_circular_grid.max_consistency <= 1e-8,
              "grid consistency residual " + fmt(g_circular_grid.max_consistency));
    c.require(g_circular_grid.max_prime_residual <= 1e-8,
              "grid subordination-prime residual " +
                  fmt(g_circular_grid.max_prime_residual));
  } else {
    c.require(false, "criterion 1 grid unavailable for residual checks");
  }

  // fold associativity
  {
    ComplexMatrix e(2);
    e(0, 1) = 1.0;
    SummandOracle o1(Summand(2, ComplexMatrix(2), e,
                             VariableModel::selfadjoint(Measure1D::semicircle(2.0, 200))));
    SummandOracle o2(Summand(2, ComplexMatrix(2), e,
                             VariableModel::selfadjoint(Measure1D::semicircle(1.5, 200))));
    SummandOracle o3(Summand(2, ComplexMatrix(2), e,
                             VariableModel::selfadjoint(Measure1D::atoms({{-1.0, 0.5}, {1.0, 0.5}}))));
    std::mt19937_64 rng(8);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix b = fbtest::random_upper_half(rng, 2, 0.4, 2.0);
      const ComplexMatrix left = fold_sum({&o1, &o2, &o3}, b, SolverOptions{});
      const ComplexMatrix right = fold_sum({&o2, &o3, &o1}, b, SolverOptions{});
      worst = std::max(worst, (left - right).frobenius_norm());
    }
    c.require(worst <= 1e-6, "fold associativity gap " + fmt(worst));
  }

  // bit-exact seed determinism
  {
    EnsembleSpec spec{TriangularEllipticKind{{1.0, 0.25, cplx(0.2, 0.1)}}, 128, 31415};
    const ComplexMatrix x = sample(spec);
    const ComplexMatrix y = sample(spec);
    bool identical = true;
    for (int i = 0; i < x.dim() && identical; ++i)
      for (int j = 0; j < x.dim(); ++j)
        if (x(i, j) != y(i, j)) {
          identical = false;
          break;
        }
    c.require(identical, "samples for one seed differ");
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Entry> entries = {
      {1, "circular law through the general pipeline", criterion1},
      {2, "elliptic closed form vs pipeline transform", criterion2},
      {3, "Haagerup-Larsen radial distribution", criterion3},
      {4, "R-diagonal pipeline agreement", criterion4},
      {5, "selfadjoint sum Hilbert transform", criterion5},
      {6, "atom mass of the free sum", criterion6},
      {7, "triangular-elliptic Monte Carlo support", criterion7},
      {8, "linearization corner identity", criterion8},
      {9, "property suites", criterion9},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const double t0 = now_seconds();
    Check c;
    try {
      c = entry.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = now_seconds() - t0;
    std::printf("[%s] criterion %d: %s (%s, %.1fs)\n", c.ok ? "PASS" : "FAIL", entry.id,
                entry.name, c.detail.empty() ? "ok" : c.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += c.ok ? 0 : 1;
  }
  return failures;
}
