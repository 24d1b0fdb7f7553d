#include <benchmark/benchmark.h>

#include "smasim/signal_gen.hpp"
#include "smasim/sysid.hpp"

using namespace smasim;

namespace {

SysIdDataset make_dataset() {
    MultisineSpec ms;
    ms.max_freq_hz = 5.0;
    ms.line_spacing_hz = 0.02;
    ms.amplitude = 1.0;
    ms.sample_rate_hz = 100.0;
    ms.duration_s = 50.0;
    ms.phase_seed = 2024;
    SysIdDataset d;
    d.input = generate_multisine(ms, Unit::meters);
    d.output = apply_model(LtiModel::iir({0.633 * 0.25}, {-1.0, 0.25}, 100.0), d.input);
    return d;
}

}  // namespace

static void BM_FitIir(benchmark::State& state) {
    const SysIdDataset data = make_dataset();
    const auto order = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        LtiModel m = fit_iir_ls(data, order);
        benchmark::DoNotOptimize(m.b().data());
    }
}
BENCHMARK(BM_FitIir)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_FitFir(benchmark::State& state) {
    const SysIdDataset data = make_dataset();
    const auto order = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        LtiModel m = fit_fir_ls(data, order);
        benchmark::DoNotOptimize(m.b().data());
    }
}
BENCHMARK(BM_FitFir)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_FrequencyResponse(benchmark::State& state) {
    const SysIdDataset data = make_dataset();
    const LtiModel model = fit_iir_ls(data, 100);
    std::vector<double> freqs;
    for (double f = 0.05; f < 5.0; f += 0.05) freqs.push_back(f);
    for (auto _ : state) {
        FrequencyResponse fr = frequency_response(model, freqs);
        benchmark::DoNotOptimize(fr.magnitude_db.data());
    }
}
BENCHMARK(BM_FrequencyResponse);

BENCHMARK_MAIN();
