#include "ghlab/ghlab.hpp"

#include <benchmark/benchmark.h>

using namespace ghlab;

namespace {

const SymCoupling kSym = SymCoupling::make(2.0, 0.3, 1.0);
const HermCoupling kHerm = HermCoupling::make(2.0, cplx(0.3, 0.4), 1.5);

void BM_c3_alpha(benchmark::State& st) {
  const C3Point p{0.4, -0.7, cplx(0.1, 0.3)};
  for (auto _ : st) benchmark::DoNotOptimize(c3::alpha(p, kSym));
}
BENCHMARK(BM_c3_alpha);

void BM_c3_fields(benchmark::State& st) {
  const C3Point p{0.4, -0.7, cplx(0.1, 0.3)};
  for (auto _ : st) benchmark::DoNotOptimize(c3::c3_fields(p, kSym));
}
BENCHMARK(BM_c3_fields);

void BM_tilde_alpha(benchmark::State& st) {
  const PosVertexPoint p{0.4, -0.7, cplx(0.1, 0.3)};
  const TruncSpec trunc{static_cast<int>(st.range(0)), 1e-8, TailModel::inverse_square};
  for (auto _ : st) benchmark::DoNotOptimize(pos::tilde_alpha(p, kSym, trunc));
}
BENCHMARK(BM_tilde_alpha)->Arg(48)->Arg(200)->Arg(1000);

void BM_lattice_gamma(benchmark::State& st) {
  const neg::LatticeKernel k(kHerm);
  const neg::Offset d{0.1, 0.2 * st.range(0), -0.3, 0.1, 0.25};
  for (auto _ : st) benchmark::DoNotOptimize(k.gamma(d));
}
BENCHMARK(BM_lattice_gamma)->Arg(0)->Arg(1)->Arg(5);

void BM_lattice_gamma_grad(benchmark::State& st) {
  const neg::LatticeKernel k(kHerm);
  const neg::Offset d{0.1, 0.2, -0.3, 0.1, 0.25};
  for (auto _ : st) benchmark::DoNotOptimize(k.gamma_grad(d));
}
BENCHMARK(BM_lattice_gamma_grad);

void BM_smesh_build(benchmark::State& st) {
  const NegVertexPoint p{cplx(0.0, 0.3), cplx(0.0, -0.2), 0.5};
  for (auto _ : st) {
    neg::SMesh mesh(kHerm, {p});
    benchmark::DoNotOptimize(mesh.nodes().size());
  }
}
BENCHMARK(BM_smesh_build)->Unit(benchmark::kMillisecond);

void BM_smesh_gamma_i(benchmark::State& st) {
  const NegVertexPoint p{cplx(0.0, 0.3), cplx(0.0, -0.2), 0.5};
  const neg::SMesh mesh(kHerm, {p});
  for (auto _ : st) benchmark::DoNotOptimize(mesh.gamma_i(p));
}
BENCHMARK(BM_smesh_gamma_i)->Unit(benchmark::kMillisecond);

void BM_p_integrals(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(neg::p_integrals(0.3, -0.2, 0.5, kHerm));
}
BENCHMARK(BM_p_integrals);

void BM_ov_potential(benchmark::State& st) {
  const classic2d::OVParams ov{0.5, {48, 1e-8, TailModel::inverse_square}};
  for (auto _ : st) benchmark::DoNotOptimize(classic2d::ov_potential(0.7, cplx(0.2, 0.3), ov));
}
BENCHMARK(BM_ov_potential);

void BM_flow_integrate(benchmark::State& st) {
  const flow::FlowState s0{1.0, 1.5, 2.0, 0.3, 0.0};
  for (auto _ : st) benchmark::DoNotOptimize(flow::integrate(s0, 0.5, 1e-3).states.size());
}
BENCHMARK(BM_flow_integrate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
