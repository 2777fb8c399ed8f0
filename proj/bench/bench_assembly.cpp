// SPDX-License-Identifier: Apache-2.0
//
// Serial reference path against the OpenMP kernels. Argument: mesh subdivisions per axis.

#include <memory>

#include <benchmark/benchmark.h>

#include "feec/assembly.hpp"
#include "feec/manufactured.hpp"

namespace
{

using namespace feec;

struct Fixture
{
  explicit Fixture(int n)
      : mesh(std::make_shared<const Mesh>(build_structured_cube(n))),
        sigma(build_space(mesh, Family::nedelec1, 2, BoundaryCondition::none)),
        velocity(build_space(mesh, Family::raviart_thomas, 2,
                             BoundaryCondition::homogeneous_essential))
  {
  }

  std::shared_ptr<const Mesh> mesh;
  FESpace sigma;
  FESpace velocity;
};

void hodge_system(benchmark::State &state, Execution exec)
{
  const Fixture fx(static_cast<int>(state.range(0)));
  const ManufacturedCase mc = make_case(CaseId::II);
  AssemblyOptions opts;
  opts.exec = exec;
  for (auto _ : state)
  {
    SaddleSystem sys = assemble_hodge_laplace_system(fx.sigma, fx.velocity, mc.f, opts);
    benchmark::DoNotOptimize(sys.matrix.values().data());
  }
  state.counters["cells"] = static_cast<double>(fx.mesh->tets().size());
}

void interpolation(benchmark::State &state, Execution exec)
{
  const Fixture fx(static_cast<int>(state.range(0)));
  const ManufacturedCase mc = make_case(CaseId::II);
  for (auto _ : state)
  {
    FEFunction u = canonical_interpolate(fx.velocity, mc.u, kInterpolationPoints, exec);
    benchmark::DoNotOptimize(u.coeffs.data());
  }
}

void error_norm(benchmark::State &state, Execution exec)
{
  const Fixture fx(static_cast<int>(state.range(0)));
  const ManufacturedCase mc = make_case(CaseId::II);
  const FEFunction u = canonical_interpolate(fx.velocity, mc.u);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(l2_error(u, mc.u, 10, Quantity::value, exec));
  }
}

}  // namespace

BENCHMARK_CAPTURE(hodge_system, serial, Execution::serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hodge_system, parallel, Execution::parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(interpolation, serial, Execution::serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(interpolation, parallel, Execution::parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(error_norm, serial, Execution::serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(error_norm, parallel, Execution::parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
