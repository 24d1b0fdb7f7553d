#include <benchmark/benchmark.h>

#include "smasim/power_metrics.hpp"
#include "smasim/signal_gen.hpp"
#include "smasim/simulate.hpp"

using namespace smasim;

namespace {

ActuatorModel make_model(bool water, bool chamber) {
    ActuatorModel m;
    if (water) {
        m.medium.name = "water";
        m.medium.h_W_m2K = 15000.0;
    } else {
        m.medium.name = "air";
        m.medium.h_W_m2K = 150.0;
    }
    if (chamber) m.chamber = ChamberSpec{1e-2, 5.6e-3, 5e-2};
    return m;
}

Waveform make_drive(double volts, double seconds) {
    PwmSpec d;
    d.frequency_hz = 1.0;
    d.duty_fraction = 0.07;
    d.amplitude_volts = volts;
    d.sample_rate_hz = 1000.0;
    d.duration_s = seconds;
    return generate_pwm(d);
}

}  // namespace

static void BM_SimulateAir(benchmark::State& state) {
    const ActuatorModel model = make_model(false, false);
    const Waveform drive = make_drive(2.7, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        SimTrace tr = simulate_actuator(model, drive);
        benchmark::DoNotOptimize(tr.displacement_m.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(drive.size()));
}
BENCHMARK(BM_SimulateAir)->Arg(8)->Arg(32);

static void BM_SimulateChamber(benchmark::State& state) {
    const ActuatorModel model = make_model(true, true);
    const Waveform drive = make_drive(4.2, static_cast<double>(state.range(0)));
    for (auto _ : state) {
        SimTrace tr = simulate_actuator(model, drive);
        benchmark::DoNotOptimize(tr.displacement_m.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(drive.size()));
}
BENCHMARK(BM_SimulateChamber)->Arg(8)->Arg(32);

static void BM_PowerMetrics(benchmark::State& state) {
    const ActuatorModel model = make_model(false, false);
    const Waveform drive = make_drive(2.7, 32.0);
    const Waveform power = electrical_power(drive, model.wire.resistance_ohm);
    for (auto _ : state) {
        PowerMetrics m = power_metrics(power, 2.0);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_PowerMetrics);

BENCHMARK_MAIN();
