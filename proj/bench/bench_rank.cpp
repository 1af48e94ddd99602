#include <wlp/hilbert.hpp>
#include <wlp/linalg.hpp>
#include <wlp/random.hpp>

#include <benchmark/benchmark.h>
#include <omp.h>

namespace {

const wlp::PrimeField F(wlp::kDefaultPrimes[0]);

// Rank-deficient square matrix: product of n x r and r x n factors.
wlp::DenseMatrix low_rank(std::size_t n, std::size_t r)
{
    wlp::Rng rng(wlp::Seed{n * 31 + r});
    std::vector<std::uint32_t> a(n * r), b(r * n);
    for (auto& x : a) x = static_cast<std::uint32_t>(rng.below(F.modulus()));
    for (auto& x : b) x = static_cast<std::uint32_t>(rng.below(F.modulus()));
    wlp::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            const auto aik = a[i * r + k];
            for (std::size_t j = 0; j < n; ++j) m(i, j) = F.add(m(i, j), F.mul(aik, b[k * n + j]));
        }
    return m;
}

void BM_DenseRankReference(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = low_rank(n, n - n / 8);
    for (auto _ : state) benchmark::DoNotOptimize(wlp::dense_rank_reference(m, F));
    state.SetComplexityN(state.range(0));
}

void BM_DenseRank(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    const auto m = low_rank(n, n - n / 8);
    for (auto _ : state) benchmark::DoNotOptimize(wlp::dense_rank(m, F));
    state.SetComplexityN(state.range(0));
}

void BM_QuotientDim(benchmark::State& state)
{
    omp_set_num_threads(static_cast<int>(state.range(0)));
    const auto spec = wlp::IdealSpec::moment(7, 9, 3);
    for (auto _ : state) benchmark::DoNotOptimize(wlp::quotient_dim(spec, 8, F));
}

} // namespace

BENCHMARK(BM_DenseRankReference)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseRank)
    ->ArgsProduct({{128, 256, 512, 1024}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuotientDim)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
