#include "freebrown/brown.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>
#include <thread>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix build_argument(int dim, cplx lambda, double eps, double delta) {
  ComplexMatrix b(dim);
  b(0, 0) = cplx(0.0, eps);
  b(0, 1) = lambda;
  b(1, 0) = std::conj(lambda);
  b(1, 1) = cplx(0.0, eps);
  for (int i = 2; i < dim; ++i) b(i, i) = cplx(0.0, delta);
  return b;
}

std::vector<Summand> attach_models(const Linearization& l, const ModelMap& models) {
  std::vector<Summand> out;
  for (auto& term : split_by_variable(l)) {
    if (term.variable == 0) {
      out.emplace_back(std::move(term), VariableModel::selfadjoint(Measure1D::point_mass(0.0)));
      continue;
    }
    auto it = models.find(term.variable);
    if (it == models.end())
      throw Error("corner_transform: no model for variable x" + std::to_string(term.variable));
    out.emplace_back(std::move(term), it->second);
  }
  return out;
}

// Geometric-tail extrapolation from the last three values of a sequence
// converging like value + c * eps^p on a roughly geometric schedule.
cplx richardson_tail(const std::vector<cplx>& seq) {
  const std::size_t n = seq.size();
  if (n < 3) return seq.back();
  const cplx d1 = seq[n - 2] - seq[n - 3];
  const cplx d2 = seq[n - 1] - seq[n - 2];
  if (std::abs(d1) == 0.0) return seq.back();
  const cplx rho = d2 / d1;
  if (std::abs(rho) >= 0.95) return seq.back();  // ratio-monotonicity guard
  return seq[n - 1] + d2 * rho / (1.0 - rho);
}

}  // namespace

void LambdaGrid::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw DomainError("LambdaGrid: bounds must satisfy re_min < re_max, im_min < im_max");
  if (nx < 3 || ny < 3) throw DomainError("LambdaGrid: need nx, ny >= 3");
}

CornerValues corner_transform(const Linearization& l, const ModelMap& models, cplx lambda,
                              double eps, double delta, const SolverOptions& opts,
                              ComplexMatrix* warm_omega2) {
  if (!(eps > 0.0)) throw DomainError("corner_transform: eps must be positive");
  if (delta < 0.0 || delta > eps / 10.0)
    throw DomainError("corner_transform: delta must satisfy 0 <= delta <= eps/10");
  if (l.dim > 2 && delta <= 0.0)
    throw DomainError("corner_transform: linearized pencils need delta > 0");

  auto summands = attach_models(l, models);
  std::vector<std::unique_ptr<SummandOracle>> owned;
  std::vector<CauchyOracle*> oracles;
  owned.reserve(summands.size());
  for (auto& s : summands) {
    owned.push_back(std::make_unique<SummandOracle>(std::move(s)));
    oracles.push_back(owned.back().get());
  }

  const ComplexMatrix b = build_argument(l.dim, lambda, eps, delta);
  const ComplexMatrix* initial =
      (warm_omega2 && warm_omega2->dim() == l.dim) ? warm_omega2 : nullptr;
  FoldResult fold;
  try {
    fold = fold_sum_detailed(oracles, b, opts, initial, warm_omega2);
  } catch (const NoConvergence& err) {
    throw NoConvergence("corner_transform at lambda = (" + std::to_string(lambda.real()) +
                            ", " + std::to_string(lambda.imag()) + "), eps = " +
                            std::to_string(eps) + ": " + err.what(),
                        err.residual(), err.iterations());
  }

  CornerValues out;
  out.g11 = fold.g(0, 0);
  out.g12 = fold.g(0, 1);
  out.g21 = fold.g(1, 0);
  out.g22 = fold.g(1, 1);
  out.iterations = fold.iterations;
  out.residual = fold.residual;
  out.consistency = fold.consistency;
  out.prime_residual = fold.prime_residual;
  return out;
}

std::size_t DensityGrid::converged_count() const {
  std::size_t n = 0;
  for (char c : converged) n += (c != 0);
  return n;
}

void DensityGrid::write_csv(std::ostream& os) const {
  os << "re_lambda,im_lambda,epsilon,g_re,g_im,g11_re,g11_im,density,converged\n";
  char line[512];
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      const cplx lam = grid.node(ix, iy);
      std::snprintf(line, sizeof(line),
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", lam.real(),
                    lam.imag(), epsilon, g_values[k].real(), g_values[k].imag(),
                    g11_values[k].real(), g11_values[k].imag(), density[k],
                    converged[k] ? 1 : 0);
      os << line;
    }
  }
}

namespace {

struct NodeSolve {
  cplx g21, g11;
  bool ok = false;
  double consistency = 0.0;
  double prime_residual = 0.0;
};

// per-node corner solve over the whole grid, optionally multithreaded;
// assembly is by node index so the output does not depend on worker count
std::vector<NodeSolve> solve_all_nodes(const Linearization& l, const ModelMap& models,
                                       const LambdaGrid& grid, double eps,
                                       const GridOptions& opts) {
  std::vector<NodeSolve> nodes(grid.size());
  const int workers = std::max(1, opts.workers);
  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= nodes.size()) return;
      const int ix = static_cast<int>(k) % grid.nx;
      const int iy = static_cast<int>(k) / grid.nx;
      try {
        const CornerValues c = corner_transform(l, models, grid.node(ix, iy), eps,
                                                opts.delta_factor * eps, opts.solver);
        nodes[k] = {c.g21, c.g11, true, c.consistency, c.prime_residual};
      } catch (const NoConvergence&) {
        nodes[k] = {0.0, 0.0, false};
      } catch (const DivergedFromHalfPlane&) {
        nodes[k] = {0.0, 0.0, false};
      } catch (const SingularCauchy&) {
        nodes[k] = {0.0, 0.0, false};
      } catch (const SingularResolvent&) {
        nodes[k] = {0.0, 0.0, false};
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
  }
  return nodes;
}

// centered difference with one-sided fallback; returns false when no
// converged neighbor pair is available
bool directional_diff(const DensityGrid& dg, std::size_t lo, std::size_t mid, std::size_t hi,
                      bool has_lo, bool has_hi, double h, cplx& out) {
  const auto ok = [&](std::size_t k) { return dg.converged[k] != 0; };
  if (has_lo && has_hi && ok(lo) && ok(hi)) {
    out = (dg.g_values[hi] - dg.g_values[lo]) / (2.0 * h);
    return true;
  }
  if (has_hi && ok(hi) && ok(mid)) {
    out = (dg.g_values[hi] - dg.g_values[mid]) / h;
    return true;
  }
  if (has_lo && ok(lo) && ok(mid)) {
    out = (dg.g_values[mid] - dg.g_values[lo]) / h;
    return true;
  }
  return false;
}

void wirtinger_density(DensityGrid& dg) {
  const LambdaGrid& grid = dg.grid;
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      if (!dg.converged[k]) continue;
      cplx du, dv;
      const bool okx = directional_diff(dg, grid.index(ix - 1, iy), k, grid.index(ix + 1, iy),
                                        ix > 0, ix + 1 < grid.nx, grid.hx(), du);
      const bool oky = directional_diff(dg, grid.index(ix, iy - 1), k, grid.index(ix, iy + 1),
                                        iy > 0, iy + 1 < grid.ny, grid.hy(), dv);
      if (!okx || !oky) {
        dg.converged[k] = 0;
        continue;
      }
      const cplx dbar = 0.5 * (du + cplx(0.0, 1.0) * dv);
      dg.density[k] = dbar.real() / kPi;
    }
  }
}

// log of the regularized determinant, up to a lambda-independent constant,
// by integrating the (1,1) corner entry over the regularization parameter
double log_det_by_eps_ladder(const Linearization& l, const ModelMap& models, cplx lambda,
                             double eps, double eps_top, int n_steps,
                             const GridOptions& opts) {
  // d/de log Delta_e = -Im g11(e); integrate on a log-spaced ladder
  double acc = 0.0;
  const double r = std::log(eps_top / eps) / n_steps;
  ComplexMatrix warm;
  double prev_e = eps_top;
  double prev_f = 0.0;
  for (int j = 0; j <= n_steps; ++j) {
    const double e = eps_top * std::exp(-r * j);
    const CornerValues c =
        corner_transform(l, models, lambda, e, opts.delta_factor * e, opts.solver, &warm);
    const double f = c.g11.imag();  // integrand Im g11(e)
    if (j > 0) acc += 0.5 * (prev_f + f) * (prev_e - e);
    prev_e = e;
    prev_f = f;
  }
  return acc;  // equals logDelta_eps - logDelta_epsTop
}

void laplacian_density(const Linearization& l, const ModelMap& models, DensityGrid& dg,
                       const GridOptions& opts) {
  const LambdaGrid& grid = dg.grid;
  const double scale =
      std::max({std::abs(grid.re_min), std::abs(grid.re_max), std::abs(grid.im_min),
                std::abs(grid.im_max), 1.0});
  const double eps_top = 10.0 * scale;
  std::vector<double> ld(grid.size(), 0.0);
  std::vector<char> have(grid.size(), 0);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      try {
        ld[k] = log_det_by_eps_ladder(l, models, grid.node(ix, iy), dg.epsilon, eps_top, 48,
                                      opts);
        have[k] = 1;
      } catch (const NoConvergence&) {
        have[k] = 0;
      }
    }
  }
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const std::size_t k = grid.index(ix, iy);
      if (ix == 0 || iy == 0 || ix + 1 == grid.nx || iy + 1 == grid.ny || !have[k] ||
          !have[grid.index(ix - 1, iy)] || !have[grid.index(ix + 1, iy)] ||
          !have[grid.index(ix, iy - 1)] || !have[grid.index(ix, iy + 1)]) {
        dg.converged[k] = 0;
        continue;
      }
      const double lap = (ld[grid.index(ix - 1, iy)] - 2.0 * ld[k] + ld[grid.index(ix + 1, iy)]) /
                             (grid.hx() * grid.hx()) +
                         (ld[grid.index(ix, iy - 1)] - 2.0 * ld[k] + ld[grid.index(ix, iy + 1)]) /
                             (grid.hy() * grid.hy());
      dg.density[k] = lap / (2.0 * kPi);
    }
  }
}

}  // namespace

DensityGrid density_grid(const Linearization& l, const ModelMap& models, const LambdaGrid& grid,
                         double eps, const GridOptions& opts) {
  grid.validate();
  if (!(eps > 0.0)) throw DomainError("density_grid: eps must be positive");
  if (std::max(grid.hx(), grid.hy()) > eps) {
    std::fprintf(stderr,
                 "warning: grid spacing %g exceeds epsilon %g; the finite-difference "
                 "density is under-resolved near the support boundary\n",
                 std::max(grid.hx(), grid.hy()), eps);
  }

  DensityGrid dg;
  dg.grid = grid;
  dg.epsilon = eps;
  dg.g_values.assign(grid.size(), 0.0);
  dg.g11_values.assign(grid.size(), 0.0);
  dg.density.assign(grid.size(), 0.0);
  dg.converged.assign(grid.size(), 0);

  const auto nodes = solve_all_nodes(l, models, grid, eps, opts);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    dg.g_values[k] = nodes[k].g21;
    dg.g11_values[k] = nodes[k].g11;
    dg.converged[k] = nodes[k].ok ? 1 : 0;
    failures += nodes[k].ok ? 0 : 1;
    if (nodes[k].ok) {
      dg.max_consistency = std::max(dg.max_consistency, nodes[k].consistency);
      dg.max_prime_residual = std::max(dg.max_prime_residual, nodes[k].prime_residual);
    }
  }
  if (static_cast<double>(failures) > opts.max_failure_fraction * static_cast<double>(grid.size()))
    throw NoConvergence("density_grid: " + std::to_string(failures) + " of " +
                            std::to_string(grid.size()) + " nodes failed to converge",
                        0.0, 0);

  if (opts.method == DensityMethod::Wirtinger) {
    wirtinger_density(dg);
  } else {
    laplacian_density(l, models, dg, opts);
  }

  double mass = 0.0;
  for (std::size_t k = 0; k < dg.density.size(); ++k) {
    if (dg.converged[k]) mass += dg.density[k];
  }
  dg.total_mass = mass * grid.hx() * grid.hy();
  return dg;
}

double density_at(const Linearization& l, const ModelMap& models, cplx lambda, double eps,
                  double h, const GridOptions& opts) {
  const double delta = opts.delta_factor * eps;
  const cplx ge = corner_transform(l, models, lambda + h, eps, delta, opts.solver).g21;
  const cplx gw = corner_transform(l, models, lambda - h, eps, delta, opts.solver).g21;
  const cplx gn = corner_transform(l, models, lambda + cplx(0.0, h), eps, delta, opts.solver).g21;
  const cplx gs = corner_transform(l, models, lambda - cplx(0.0, h), eps, delta, opts.solver).g21;
  const cplx du = (ge - gw) / (2.0 * h);
  const cplx dv = (gn - gs) / (2.0 * h);
  return (0.5 * (du + cplx(0.0, 1.0) * dv)).real() / kPi;
}

std::vector<double> default_eps_schedule() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}; }

SweepResult epsilon_sweep(const Linearization& l, const ModelMap& models, cplx lambda,
                          const std::vector<double>& eps_schedule, const GridOptions& opts) {
  if (eps_schedule.size() < 3)
    throw DomainError("epsilon_sweep: need at least three epsilon values");
  for (std::size_t i = 1; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw DomainError("epsilon_sweep: schedule must be strictly decreasing");
  }
  SweepResult out;
  ComplexMatrix warm;
  for (double eps : eps_schedule) {
    const CornerValues c =
        corner_transform(l, models, lambda, eps, opts.delta_factor * eps, opts.solver, &warm);
    out.values.push_back(c.g21);
  }
  out.at_smallest = out.values.back();
  out.richardson = richardson_tail(out.values);
  out.stable = true;
  for (std::size_t i = 2; i < out.values.size(); ++i) {
    const double prev = std::abs(out.values[i - 1] - out.values[i - 2]);
    const double cur = std::abs(out.values[i] - out.values[i - 1]);
    if (cur > prev * 1.05 + 1e-15) out.stable = false;
  }
  return out;
}

AtomEstimate atom_mass_detailed(const Linearization& l, const ModelMap& models, cplx lambda,
                                const std::vector<double>& eps_schedule,
                                const GridOptions& opts) {
  if (eps_schedule.size() < 3)
    throw DomainError("atom_mass: need at least three epsilon values");
  for (std::size_t i = 1; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw DomainError("atom_mass: schedule must be strictly decreasing");
  }
  AtomEstimate out;
  ComplexMatrix warm;
  std::vector<cplx> seq;
  for (double eps : eps_schedule) {
    const CornerValues c =
        corner_transform(l, models, lambda, eps, opts.delta_factor * eps, opts.solver, &warm);
    const cplx m = cplx(0.0, eps) * c.g11;
    out.values.push_back(m.real());
    seq.push_back(m.real());
    out.offdiag_at_smallest = std::abs(cplx(0.0, eps) * c.g21);
  }
  out.mass = richardson_tail(seq).real();
  return out;
}

double atom_mass(const Linearization& l, const ModelMap& models, cplx lambda,
                 const std::vector<double>& eps_schedule, const GridOptions& opts) {
  return atom_mass_detailed(l, models, lambda, eps_schedule, opts).mass;
}

}  // namespace freebrown
