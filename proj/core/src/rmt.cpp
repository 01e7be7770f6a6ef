#include "freebrown/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freebrown/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace freebrown {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Rng::uniform() {
  // 53-bit mantissa in (0, 1]
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * kPi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cplx Rng::complex_gaussian() {
  const double g1 = gaussian();
  const double g2 = gaussian();
  return cplx(g1, g2) / std::sqrt(2.0);
}

namespace {

ComplexMatrix sample_triangular_elliptic(const EllipticParams& p, int n, Rng& rng) {
  p.validate();
  const double alpha = p.alpha, beta = p.beta;
  const cplx gamma = p.gamma;
  const double diag_var = 0.5 * (alpha + beta);
  if (diag_var * diag_var < std::norm(gamma) - 1e-15)
    throw InvalidCovariance("triangular-elliptic: diagonal covariance not PSD");

  ComplexMatrix a(n);
  const double inv_n = 1.0 / n;

  // off-diagonal pairs (i < j): a_ij has variance alpha/N and
  // a_ji = (gamma/alpha) conj(a_ij) + independent remainder of variance
  // (beta - |gamma|^2/alpha)/N
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (alpha > 0.0) {
        const cplx up = std::sqrt(alpha * inv_n) * rng.complex_gaussian();
        const double rem = beta - std::norm(gamma) / alpha;
        a(i, j) = up;
        a(j, i) = (gamma / alpha) * std::conj(up) +
                  std::sqrt(std::max(rem, 0.0) * inv_n) * rng.complex_gaussian();
      } else {
        // alpha = 0 forces gamma = 0
        a(i, j) = 0.0;
        a(j, i) = std::sqrt(beta * inv_n) * rng.complex_gaussian();
      }
    }
  }

  // diagonal: E|a_ii|^2 = (alpha+beta)/2N, E a_ii^2 = gamma/N
  const double pvar = (diag_var / 2.0 + 0.5 * gamma.real()) * inv_n;
  const double qvar = (diag_var / 2.0 - 0.5 * gamma.real()) * inv_n;
  const double rcov = 0.5 * gamma.imag() * inv_n;
  for (int i = 0; i < n; ++i) {
    const double g1 = rng.gaussian();
    const double g2 = rng.gaussian();
    double x = 0.0, y = 0.0;
    if (pvar > 0.0) {
      const double sp = std::sqrt(pvar);
      x = sp * g1;
      const double resid = qvar - rcov * rcov / pvar;
      y = (rcov / sp) * g1 + std::sqrt(std::max(resid, 0.0)) * g2;
    } else {
      y = std::sqrt(std::max(qvar, 0.0)) * g2;
    }
    a(i, i) = cplx(x, y);
  }
  return a;
}

ComplexMatrix sample_ginibre(int n, Rng& rng) {
  ComplexMatrix a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * rng.complex_gaussian();
  return a;
}

// inverse-CDF sample from the measure data
double sample_location(const Measure1D& mu, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (const auto& p : mu.atom_list()) {
    cum += p.weight;
    if (u <= cum) return p.location;
  }
  for (const auto& p : mu.quadrature()) {
    cum += p.weight;
    if (u <= cum) return p.location;
  }
  return mu.max_support();
}

ComplexMatrix sample_biunitary(const Measure1D& sv_law, int n, Rng& rng) {
  std::vector<cplx> d(static_cast<std::size_t>(n));
  for (auto& v : d) v = sample_location(sv_law, rng);
  const ComplexMatrix u = haar_unitary_matrix(n, rng);
  const ComplexMatrix v = haar_unitary_matrix(n, rng);
  ComplexMatrix ud = u;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ud(i, j) *= d[static_cast<std::size_t>(j)];
  return ud * v.adjoint();
}

// deterministic-spectrum realization of one normal variable, conjugated by
// an independent Haar unitary so distinct variables become asymptotically free
ComplexMatrix sample_model(const VariableModel& model, int n, Rng& rng) {
  if (model.kind == VariableModel::Kind::HaarUnitary) return haar_unitary_matrix(n, rng);
  const auto qs = model.law.quantiles(n);
  std::vector<cplx> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = (model.kind == VariableModel::Kind::Selfadjoint)
                                         ? cplx(qs[static_cast<std::size_t>(i)])
                                         : std::polar(1.0, qs[static_cast<std::size_t>(i)]);
  }
  const ComplexMatrix q = haar_unitary_matrix(n, rng);
  ComplexMatrix qd = q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) qd(i, j) *= d[static_cast<std::size_t>(j)];
  return qd * q.adjoint();
}

ComplexMatrix sample_polynomial(const PolynomialKind& kind, int n, Rng& rng) {
  const int vars = kind.poly.variable_count();
  std::vector<ComplexMatrix> subst;
  subst.reserve(static_cast<std::size_t>(vars));
  for (int j = 1; j <= vars; ++j) {
    auto it = kind.models.find(j);
    if (it == kind.models.end())
      throw Error("sample: no model for variable x" + std::to_string(j));
    subst.push_back(sample_model(it->second, n, rng));
  }
  return evaluate_poly(kind.poly, subst);
}

}  // namespace

ComplexMatrix haar_unitary_matrix(int n, Rng& rng) {
  ComplexMatrix g = sample_ginibre(n, rng);
  std::vector<cplx> tau(static_cast<std::size_t>(n));
  int info = LAPACKE_zgeqrf(LAPACK_ROW_MAJOR, n, n, g.data(), n, tau.data());
  if (info != 0) throw EigensolverFailure("zgeqrf failed with info " + std::to_string(info));
  // phases of the R diagonal, before the reflectors overwrite nothing below
  std::vector<cplx> phase(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const cplx r = g(i, i);
    phase[static_cast<std::size_t>(i)] = (std::abs(r) == 0.0) ? cplx(1.0) : r / std::abs(r);
  }
  info = LAPACKE_zungqr(LAPACK_ROW_MAJOR, n, n, n, g.data(), n, tau.data());
  if (info != 0) throw EigensolverFailure("zungqr failed with info " + std::to_string(info));
  // Q <- Q * conj(phase) so the distribution is exactly Haar
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) *= std::conj(phase[static_cast<std::size_t>(j)]);
  return g;
}

ComplexMatrix sample(const EnsembleSpec& spec) {
  if (spec.n < 2) throw DomainError("sample: need N >= 2");
  Rng rng(spec.seed);
  if (const auto* te = std::get_if<TriangularEllipticKind>(&spec.kind))
    return sample_triangular_elliptic(te->params, spec.n, rng);
  if (std::get_if<GinibreKind>(&spec.kind)) return sample_ginibre(spec.n, rng);
  if (const auto* bi = std::get_if<BiunitaryKind>(&spec.kind))
    return sample_biunitary(bi->singular_values, spec.n, rng);
  return sample_polynomial(std::get<PolynomialKind>(spec.kind), spec.n, rng);
}

std::vector<cplx> empirical_spectrum(const ComplexMatrix& m) {
  const int n = m.dim();
  auto run = [&](const ComplexMatrix& a) -> std::pair<int, std::vector<cplx>> {
    ComplexMatrix work = a;
    std::vector<cplx> w(static_cast<std::size_t>(n));
    const int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, work.data(), n, w.data(),
                                   nullptr, 1, nullptr, 1);
    return {info, std::move(w)};
  };
  auto [info, w] = run(m);
  if (info == 0) return w;
  // retry under a random unitary similarity
  Rng rng(0x5eedu);
  const ComplexMatrix q = haar_unitary_matrix(n, rng);
  auto [info2, w2] = run(q * m * q.adjoint());
  if (info2 == 0) return w2;
  throw EigensolverFailure("zgeev failed twice (info " + std::to_string(info) + ", " +
                           std::to_string(info2) + ")");
}

CompareReport compare(const std::vector<cplx>& eigs, const DensityGrid& predicted,
                      double margin) {
  if (eigs.size() < 100) throw DomainError("compare: need at least 100 eigenvalues");
  const LambdaGrid& grid = predicted.grid;
  const std::size_t n_nodes = grid.size();
  if (predicted.converged_count() < static_cast<std::size_t>(0.9 * n_nodes))
    throw DomainError("compare: predicted grid converged on fewer than 90% of nodes");

  const double hx = grid.hx(), hy = grid.hy();
  const double span_x = grid.re_max - grid.re_min;
  const double span_y = grid.im_max - grid.im_min;
  for (const cplx& e : eigs) {
    if (e.real() < grid.re_min - 0.1 * span_x || e.real() > grid.re_max + 0.1 * span_x ||
        e.imag() < grid.im_min - 0.1 * span_y || e.imag() > grid.im_max + 0.1 * span_y)
      throw GridMismatch("compare: eigenvalue cloud exceeds grid bounds by more than 10%");
  }

  // cell histogram (cells centered on nodes)
  std::vector<double> counts(n_nodes, 0.0);
  std::size_t outside = 0;
  for (const cplx& e : eigs) {
    const int ix = static_cast<int>(std::lround((e.real() - grid.re_min) / hx));
    const int iy = static_cast<int>(std::lround((e.imag() - grid.im_min) / hy));
    if (ix < 0 || ix >= grid.nx || iy < 0 || iy >= grid.ny) {
      ++outside;
      continue;
    }
    counts[grid.index(ix, iy)] += 1.0;
  }
  const double cell_area = hx * hy;
  const double total = static_cast<double>(eigs.size());
  double l1 = static_cast<double>(outside) / total;  // mass with no matching cell
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double emp = counts[k] / (total * cell_area);
    const double pred = predicted.converged[k] ? predicted.density[k] : 0.0;
    l1 += std::abs(emp - pred) * cell_area;
  }

  // support nodes and the dilated membership test
  double max_density = 0.0;
  for (std::size_t k = 0; k < n_nodes; ++k)
    if (predicted.converged[k]) max_density = std::max(max_density, predicted.density[k]);
  const double cutoff = std::max(1e-9, 1e-3 * max_density);
  std::vector<char> support(n_nodes, 0);
  for (std::size_t k = 0; k < n_nodes; ++k)
    support[k] = (predicted.converged[k] && predicted.density[k] >= cutoff) ? 1 : 0;

  const double reach = margin + 0.5 * std::hypot(hx, hy);
  const int wx = static_cast<int>(std::ceil(reach / hx)) + 1;
  const int wy = static_cast<int>(std::ceil(reach / hy)) + 1;
  std::size_t inside_count = 0;
  for (const cplx& e : eigs) {
    const int cx = static_cast<int>(std::lround((e.real() - grid.re_min) / hx));
    const int cy = static_cast<int>(std::lround((e.imag() - grid.im_min) / hy));
    bool found = false;
    for (int iy = std::max(0, cy - wy); iy <= std::min(grid.ny - 1, cy + wy) && !found; ++iy) {
      for (int ix = std::max(0, cx - wx); ix <= std::min(grid.nx - 1, cx + wx); ++ix) {
        if (!support[grid.index(ix, iy)]) continue;
        if (std::abs(e - grid.node(ix, iy)) <= reach) {
          found = true;
          break;
        }
      }
    }
    inside_count += found ? 1 : 0;
  }

  CompareReport report;
  report.l1_histogram = l1;
  report.frac_inside_support = static_cast<double>(inside_count) / total;
  report.n_eigenvalues = eigs.size();
  report.n_outside_grid = outside;
  return report;
}

}  // namespace freebrown
