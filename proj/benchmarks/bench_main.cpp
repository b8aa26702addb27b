#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sdes/desargues.hpp"
#include "sdes/graded.hpp"
#include "sdes/hypersurface.hpp"

using namespace sdes;

namespace {

TruncatedSeries random_series(const Frame& frame, int cap, std::mt19937_64& rng, int minWeight = 0) {
  std::normal_distribution<double> n(0.0, 1.0);
  TruncatedSeries s(frame, cap);
  for (int w = minWeight; w <= cap; ++w) {
    for (const MultiIndex& m : monomials_of_weight(frame, w)) s.add_term(m, Complex(n(rng), n(rng)));
  }
  return s;
}

TruncatedSeries phi42_theta(double eps, int cap = kDefaultCap) {
  auto v = [&](std::size_t i) { return TruncatedSeries::variable(frames::hypersurface(), cap, i); };
  const Complex i2(0.0, 2.0);
  const auto z = v(0), chi = v(1), tau = v(2);
  return tau + i2 * z * chi + i2 * eps * (z * z * z * z * chi * chi + z * z * chi * chi * chi * chi);
}

SegreFamily phi42_family(double eps) { return raw_family(Hypersurface::from_complex_defining(phi42_theta(eps))); }

void BM_SeriesMultiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int cap = static_cast<int>(state.range(0));
  const auto a = random_series(frames::hypersurface(), cap, rng), b = random_series(frames::hypersurface(), cap, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMultiply)->Arg(6)->Arg(8)->Arg(10);

void BM_SeriesCompose(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int cap = static_cast<int>(state.range(0));
  const Frame& F = frames::family();
  const auto target = random_series(F, cap, rng);
  std::vector<TruncatedSeries> images;
  for (std::size_t v = 0; v < F.arity(); ++v) {
    images.push_back(TruncatedSeries::variable(F, cap, v) + 0.1 * random_series(F, cap, rng, F.weight(v) + 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(compose(target, images));
}
BENCHMARK(BM_SeriesCompose)->Arg(6)->Arg(8);

void BM_JoinIntersect(benchmark::State& state) {
  const SegreFamily s = phi42_family(1e-2);
  const Point2 p{Complex(0.05, 0.02), Complex(0.01, -0.01)}, q{Complex(-0.04, 0.03), Complex(0.005, 0.01)};
  const Point2 u{Complex(0.03, -0.05), Complex(-0.01, 0.0)};
  for (auto _ : state) {
    const CurveParams c1 = join(s, p, q), c2 = join(s, p, u);
    benchmark::DoNotOptimize(intersect(s, c1, pin_slope(s, u, c2.a + 0.1)));
  }
}
BENCHMARK(BM_JoinIntersect);

void BM_DesarguesResidual(benchmark::State& state) {
  const SegreFamily s = phi42_family(1e-2);
  std::vector<Configuration> cfgs;
  for (std::uint64_t i = 0; i < 64; ++i) {
    auto rng = configuration_stream(1, i);
    cfgs.push_back(sample_configuration(s, 0.1, rng));
  }
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(desargues_residual(s, cfgs[k++ % cfgs.size()]));
}
BENCHMARK(BM_DesarguesResidual);

void BM_VerifyLemma(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_lemma_normal(l));
}
BENCHMARK(BM_VerifyLemma)->DenseRange(4, 10, 2);

void BM_NormalizeFamily(benchmark::State& state) {
  const SegreFamily s = phi42_family(1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(normalize_family(s));
}
BENCHMARK(BM_NormalizeFamily);

}  // namespace

BENCHMARK_MAIN();
