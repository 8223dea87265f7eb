#include <symcone/atoms.hpp>
#include <symcone/cone.hpp>
#include <symcone/lattice.hpp>
#include <symcone/spaces.hpp>
#include <symcone/tube.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace symcone;

namespace {

AlgebraKind kind_of(int id) {
  switch (id) {
    case 0: return AlgebraKind::rank1();
    case 1: return AlgebraKind::lorentz(3);
    case 2: return AlgebraKind::sym(2);
    default: return AlgebraKind::sym(3);
  }
}

Element random_point(const AlgebraKind& kind, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.5);
  Eigen::VectorXd c(kind.dim());
  for (int i = 0; i < c.size(); ++i) c[i] = g(rng);
  return symcone::exp(Element(kind, c));
}

void BM_InvariantDistance(benchmark::State& st) {
  const AlgebraKind kind = kind_of(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(1);
  const Element a = random_point(kind, rng), b = random_point(kind, rng);
  for (auto _ : st) benchmark::DoNotOptimize(invariant_distance(a, b));
  st.SetLabel(kind.name());
}
BENCHMARK(BM_InvariantDistance)->DenseRange(0, 3);

void BM_BergmanKernel(benchmark::State& st) {
  const AlgebraKind kind = kind_of(static_cast<int>(st.range(0)));
  std::mt19937_64 rng(2);
  const KernelSpec ks = KernelSpec::with_constant(SpectralParam::constant(kind, kind.n_over_r() + 1.0), 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(kind.dim(), 0.2);
  const TubePoint z(x, random_point(kind, rng)), w(-x, random_point(kind, rng));
  for (auto _ : st) benchmark::DoNotOptimize(bergman_kernel(z, w, ks));
  st.SetLabel(kind.name());
}
BENCHMARK(BM_BergmanKernel)->DenseRange(0, 3);

void BM_LaplaceQuadrature(benchmark::State& st) {
  const AlgebraKind kind = kind_of(static_cast<int>(st.range(0)));
  const SpectralParam s = SpectralParam::constant(kind, kind.n_over_r() + 0.5);
  const Element y = Element::identity(kind);
  const QuadratureConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(laplace_power_quadrature(s, y, cfg).value);
  st.SetLabel(kind.name());
}
BENCHMARK(BM_LaplaceQuadrature)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ConeLattice(benchmark::State& st) {
  const AlgebraKind kind = kind_of(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_cone_lattice(kind, 0.4, 1.0).points.size());
  st.SetLabel(kind.name());
}
BENCHMARK(BM_ConeLattice)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_KernelCalibration(benchmark::State& st) {
  const AlgebraKind kind = kind_of(static_cast<int>(st.range(0)));
  const SpectralParam s = SpectralParam::constant(kind, kind.n_over_r() + 1.0);
  QuadratureConfig cfg;
  cfg.omega_radius = 6.0;
  cfg.order = 8;
  for (auto _ : st) benchmark::DoNotOptimize(calibrate_kernel_constant(s, cfg).d_s);
  st.SetLabel(kind.name());
}
BENCHMARK(BM_KernelCalibration)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

void BM_LsqReconstruction(benchmark::State& st) {
  const double delta = 0.1 * static_cast<double>(st.range(0));
  const AlgebraKind kind = AlgebraKind::rank1();
  const KernelSpec ks = KernelSpec::with_constant(SpectralParam(kind, {4.0}), 1.0);
  const TubeLattice tl = build_tube_lattice(build_cone_lattice(kind, delta, 1.5), 2.0, 3.0);
  const ManufacturedTarget mt = manufactured_target(tl, ks, WeightMode::statement, 2.0, 2.0, 1.0 / 3.0, 1);
  const std::vector<TubePoint> colloc = region_points(tl, static_cast<int>(2 * tl.size()), 3);
  for (auto _ : st)
    benchmark::DoNotOptimize(reconstruct_lsq(mt.F, tl, ks, WeightMode::statement, colloc).residual);
  st.counters["sites"] = static_cast<double>(tl.size());
}
BENCHMARK(BM_LsqReconstruction)->Arg(8)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
