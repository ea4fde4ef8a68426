#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "helix/ness.hpp"
#include "helix/singularities.hpp"
#include "helix/zeno.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

helix::ChainSpec helix_spec(int sites, double gamma) {
  helix::ChainSpec spec;
  spec.sites = sites;
  spec.theta_left = spec.theta_right = kPi / 2;
  spec.phi_right = kPi / 10;
  spec.anisotropy = std::cos(kPi / 10 / (sites - 1));
  spec.gamma = gamma;
  return spec;
}

void bm_build_liouvillian(benchmark::State& state) {
  const helix::ChainSpec spec = helix_spec(static_cast<int>(state.range(0)), 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(helix::build_liouvillian(spec));
  }
}
BENCHMARK(bm_build_liouvillian)->Arg(3)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void bm_solve_ness(benchmark::State& state) {
  const helix::Liouvillian liouville =
      helix::build_liouvillian(helix_spec(static_cast<int>(state.range(0)), 100.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(helix::solve_ness(liouville, 1e-10));
  }
}
BENCHMARK(bm_solve_ness)->Arg(3)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void bm_gamma_ch(benchmark::State& state) {
  const int sites = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(helix::gamma_ch(kPi / 2, kPi / 10, 0, sites));
  }
}
BENCHMARK(bm_gamma_ch)->Arg(4)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void bm_omega_cardinalities(benchmark::State& state) {
  const int max_sites = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(helix::omega_star_cardinalities(max_sites));
  }
}
BENCHMARK(bm_omega_cardinalities)->Arg(300)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
