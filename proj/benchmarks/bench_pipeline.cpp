#include <benchmark/benchmark.h>

#include <complex>

#include "freebrown/brown.hpp"
#include "freebrown/elliptic.hpp"
#include "freebrown/poly_parser.hpp"
#include "freebrown/rmt.hpp"

using namespace freebrown;

namespace {

Summand hermitized_semicircle(int nodes) {
  ComplexMatrix e(2);
  e(0, 1) = 1.0;
  return Summand(2, ComplexMatrix(2), e,
                 VariableModel::selfadjoint(Measure1D::semicircle(2.0, nodes)));
}

void BM_OvCauchyDim2(benchmark::State& state) {
  SummandOracle oracle(hermitized_semicircle(static_cast<int>(state.range(0))));
  const ComplexMatrix b = ComplexMatrix::diagonal({cplx(0.1, 0.5), cplx(-0.2, 0.7)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.g(b));
  }
}
BENCHMARK(BM_OvCauchyDim2)->Arg(100)->Arg(400)->Arg(800);

void BM_FreeAddSemicircles(benchmark::State& state) {
  SummandOracle a(hermitized_semicircle(400));
  SummandOracle c(hermitized_semicircle(400));
  ComplexMatrix b(2);
  b(0, 0) = cplx(0, 1e-3);
  b(0, 1) = cplx(0.4, 0.1);
  b(1, 0) = std::conj(b(0, 1));
  b(1, 1) = cplx(0, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(free_add(a, c, b, SolverOptions{}));
  }
}
BENCHMARK(BM_FreeAddSemicircles);

void BM_CornerTransformMonomial(benchmark::State& state) {
  const Linearization lin = linearize_polynomial(parse_polynomial("x1*x2"));
  ModelMap models;
  models[1] = VariableModel::haar_unitary(256);
  models[2] = VariableModel::selfadjoint(Measure1D::quarter_circle(2.0, 256));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        corner_transform(lin, models, cplx(0.4, 0.1), 1e-2, 1e-4, SolverOptions{}));
  }
}
BENCHMARK(BM_CornerTransformMonomial);

void BM_SolveD(benchmark::State& state) {
  const EllipticParams p{1.0, 0.25, cplx(0.2, 0.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_d(p, cplx(0.3, 0.2), 1e-3));
  }
}
BENCHMARK(BM_SolveD);

void BM_SampleTriangularElliptic(benchmark::State& state) {
  EnsembleSpec spec{TriangularEllipticKind{{1.0, 0.25, cplx(0.2, 0.0)}},
                    static_cast<int>(state.range(0)), 7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(spec));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleTriangularElliptic)->Arg(256)->Arg(512)->Arg(1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
