#include "freebrown/subord.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "freebrown/errors.hpp"

namespace freebrown {

namespace {

// h(w) = F(w) - w evaluated through one oracle
ComplexMatrix h_of(CauchyOracle& oracle, const ComplexMatrix& w) {
  ComplexMatrix g = oracle.g(w);
  ComplexMatrix f;
  try {
    f = invert(g);
  } catch (const SingularMatrix& err) {
    throw SingularCauchy(std::string("subordination: G is singular: ") + err.what());
  }
  return f - w;
}

bool safely_inside(const ComplexMatrix& w, const ComplexMatrix& half_im_b, double slack) {
  return min_eig_hermitian(imag_part(w) - half_im_b) >= -slack;
}

// quantized key for memoization at 1e-14 granularity
struct BKey {
  std::vector<long long> q;
  bool operator==(const BKey& other) const { return q == other.q; }
};

struct BKeyHash {
  std::size_t operator()(const BKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k.q) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

bool make_key(const ComplexMatrix& b, BKey& key) {
  const int n = b.dim();
  key.q.resize(2 * static_cast<std::size_t>(n) * n);
  std::size_t at = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx v = b(i, j);
      if (std::abs(v.real()) > 1e3 || std::abs(v.imag()) > 1e3) return false;
      key.q[at++] = std::llround(v.real() * 1e14);
      key.q[at++] = std::llround(v.imag() * 1e14);
    }
  }
  return true;
}

/// Transform of a pairwise free sum, solved on demand; caches solutions and
/// warm-starts from the previous one.  Confined to a single fold call.
class PartialSumOracle final : public CauchyOracle {
 public:
  PartialSumOracle(CauchyOracle& left, CauchyOracle& right, SolverOptions opts, int position)
      : left_(left), right_(right), opts_(opts), position_(position) {}

  int dim() const override { return left_.dim(); }

  ComplexMatrix g(const ComplexMatrix& b) override {
    BKey key;
    const bool keyed = opts_.memoize && make_key(b, key);
    if (keyed) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    SubordResult r;
    try {
      r = free_add(left_, right_, b, opts_, warm_valid_ ? &warm_ : nullptr);
    } catch (const NoConvergence& err) {
      throw NoConvergence("fold position " + std::to_string(position_) + ": " + err.what(),
                          err.residual(), err.iterations());
    }
    warm_ = r.omega2;
    warm_valid_ = true;
    if (keyed) memo_.emplace(std::move(key), r.g_sum);
    return r.g_sum;
  }

 private:
  CauchyOracle& left_;
  CauchyOracle& right_;
  SolverOptions opts_;
  int position_;
  std::unordered_map<BKey, ComplexMatrix, BKeyHash> memo_;
  ComplexMatrix warm_;
  bool warm_valid_ = false;
};

}  // namespace

SubordResult free_add(CauchyOracle& c1, CauchyOracle& c2, const ComplexMatrix& b,
                      const SolverOptions& opts, const ComplexMatrix* initial) {
  if (c1.dim() != b.dim() || c2.dim() != b.dim())
    throw DimensionMismatch("free_add: oracle and argument dimensions differ");
  const ComplexMatrix im_b = imag_part(b);
  if (!(min_eig_hermitian(im_b) > 0.0))
    throw NotInUpperHalfPlane("free_add: Im b must be positive definite");

  ComplexMatrix half_im_b = im_b;
  half_im_b *= 0.5;
  const double slack = 1e-12 * std::max(1.0, b.max_abs());

  ComplexMatrix w = b + ComplexMatrix::scaled_identity(b.dim(), cplx(0.0, 1.0));
  if (initial && initial->dim() == b.dim() && safely_inside(*initial, half_im_b, 0.0)) {
    w = *initial;
  }

  double tau = opts.damping;
  double prev_diff = std::numeric_limits<double>::infinity();
  double diff = prev_diff;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= opts.max_iter; ++it) {
    const ComplexMatrix inner = b + h_of(c2, w);
    const ComplexMatrix mapped = b + h_of(c1, inner);
    ComplexMatrix w_next = mapped;
    if (tau != 1.0) {
      w_next *= tau;
      ComplexMatrix keep = w;
      keep *= (1.0 - tau);
      w_next += keep;
    }
    diff = (w_next - w).frobenius_norm();
    if (!safely_inside(w_next, half_im_b, slack))
      throw DivergedFromHalfPlane("free_add: iterate left Im w >= Im b / 2");
    w = std::move(w_next);
    if (diff <= opts.tol) {
      converged = true;
      break;
    }
    if (diff > prev_diff) tau = std::max(tau * 0.5, 1.0 / 64.0);
    prev_diff = diff;
  }
  if (!converged)
    throw NoConvergence("free_add: no convergence after " + std::to_string(opts.max_iter) +
                            " iterations (residual " + std::to_string(diff) + ")",
                        diff, opts.max_iter);

  SubordResult result;
  result.omega2 = w;
  result.omega1 = b + h_of(c2, result.omega2);
  const ComplexMatrix g1 = c1.g(result.omega1);
  const ComplexMatrix g2 = c2.g(result.omega2);
  result.g_sum = g1;
  result.iterations = it;
  result.residual = diff;
  result.consistency = (g1 - g2).frobenius_norm();
  ComplexMatrix sum = result.omega1 + result.omega2 - b;
  result.prime_residual = (sum - invert(result.g_sum)).frobenius_norm();
  if (result.consistency > opts.consistency_tol || result.prime_residual > 10.0 * opts.consistency_tol)
    throw NoConvergence("free_add: consistency residual " + std::to_string(result.consistency) +
                            " above tolerance",
                        result.consistency, it);
  return result;
}

ComplexMatrix fold_sum(const std::vector<CauchyOracle*>& oracles, const ComplexMatrix& b,
                       const SolverOptions& opts) {
  return fold_sum_detailed(oracles, b, opts).g;
}

FoldResult fold_sum_detailed(const std::vector<CauchyOracle*>& oracles, const ComplexMatrix& b,
                             const SolverOptions& opts, const ComplexMatrix* initial,
                             ComplexMatrix* final_omega2) {
  if (oracles.empty()) throw Error("fold_sum: need at least one oracle");
  FoldResult out;
  if (oracles.size() == 1) {
    out.g = oracles.front()->g(b);
    return out;
  }

  // left fold: wrap all but the final pair into partial-sum oracles
  std::vector<std::unique_ptr<PartialSumOracle>> partials;
  CauchyOracle* acc = oracles[0];
  for (std::size_t j = 1; j + 1 < oracles.size(); ++j) {
    partials.push_back(std::make_unique<PartialSumOracle>(*acc, *oracles[j], opts,
                                                          static_cast<int>(j)));
    acc = partials.back().get();
  }

  SubordResult top;
  try {
    top = free_add(*acc, *oracles.back(), b, opts, initial);
  } catch (const NoConvergence& err) {
    throw NoConvergence("fold position " + std::to_string(oracles.size() - 1) + ": " +
                            err.what(),
                        err.residual(), err.iterations());
  }
  out.g = top.g_sum;
  out.iterations = top.iterations;
  out.residual = top.residual;
  out.consistency = top.consistency;
  out.prime_residual = top.prime_residual;
  if (final_omega2) *final_omega2 = top.omega2;
  return out;
}

}  // namespace freebrown
