#include "wallspace/ball.hpp"
#include "wallspace/cubulator.hpp"
#include "wallspace/link.hpp"
#include "wallspace/walls.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace wallspace;

namespace {

struct Fixture {
  ComplexSpec spec;
  Ball ball;
  std::vector<Wall> walls;
  std::vector<Partition> parts;
  explicit Fixture(int r)
      : spec(load_complex_spec(std::string(WS_FIXTURES) + "/v_bowtie.complex")), ball(build_ball(spec, r, 0)) {
    walls = extract_walls(ball, spec);
    parts = partition_walls(ball, walls);
  }
};

const Fixture& fixture() {
  static Fixture f(2);
  return f;
}

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_BallLinks(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(check_ball_links(f.ball, mode(state)));
}

void BM_Partitions(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(partition_walls(f.ball, f.walls, mode(state)));
}

void BM_WallSides(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(wall_sides(f.ball, f.walls, f.parts, mode(state)));
}

void BM_CrossingGraph(benchmark::State& state) {
  const auto& f = fixture();
  auto sides = wall_sides(f.ball, f.walls, f.parts);
  for (auto _ : state) benchmark::DoNotOptimize(crossing_graph(f.walls, sides, mode(state)));
}

void BM_Properness(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(properness_profile(f.ball, f.walls, f.parts, 2, mode(state)));
}

void BM_DualCubes(benchmark::State& state) {
  const auto& f = fixture();
  CubulationOptions opt;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(dual_cube_complex(f.ball, f.walls, f.parts, opt));
}

}  // namespace

BENCHMARK(BM_BallLinks)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Partitions)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WallSides)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossingGraph)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Properness)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DualCubes)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
