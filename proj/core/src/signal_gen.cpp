#include "smasim/signal_gen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "smasim/errors.hpp"

namespace smasim {

void PwmSpec::validate() const {
    if (!(frequency_hz > 0.0))
        throw parameter_error("PwmSpec.frequency_hz must be > 0");
    if (!(duty_fraction >= 0.0 && duty_fraction <= 1.0))
        throw parameter_error("PwmSpec.duty_fraction must be in [0,1]");
    if (!(sample_rate_hz >= 100.0 * frequency_hz))
        throw parameter_error("PwmSpec.sample_rate_hz must be >= 100 * frequency_hz");
    if (!(duration_s > 0.0))
        throw parameter_error("PwmSpec.duration_s must be > 0");
}

void MultisineSpec::validate() const {
    if (!(line_spacing_hz > 0.0))
        throw parameter_error("MultisineSpec.line_spacing_hz must be > 0");
    if (!(max_freq_hz >= line_spacing_hz))
        throw parameter_error("MultisineSpec.max_freq_hz must be >= line_spacing_hz");
    if (!(duration_s >= 1.0 / line_spacing_hz))
        throw parameter_error("MultisineSpec.duration_s must cover 1/line_spacing_hz");
    if (!(sample_rate_hz > 2.0 * max_freq_hz))
        throw parameter_error("MultisineSpec.sample_rate_hz must exceed 2 * max_freq_hz");
}

Waveform generate_pwm(const PwmSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    Waveform w;
    w.sample_rate_hz = spec.sample_rate_hz;
    w.unit = Unit::volts;
    w.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // frac(t_k * f) for t_k = k/fs, evaluated as fmod(k*f, fs)/fs: the
        // same quantity, but exact on the sample grid whenever k*f is (one
        // rounding instead of a drifting k/fs product).
        const double frac =
            std::fmod(static_cast<double>(k) * spec.frequency_hz, spec.sample_rate_hz) /
            spec.sample_rate_hz;
        w.samples[k] = frac < spec.duty_fraction ? spec.amplitude_volts : 0.0;
    }
    return w;
}

Waveform generate_multisine(const MultisineSpec& spec, Unit unit) {
    spec.validate();
    const auto n_lines = static_cast<std::size_t>(std::floor(spec.max_freq_hz / spec.line_spacing_hz + 1e-9));
    if (n_lines == 0)
        throw parameter_error("MultisineSpec: no spectral lines below max_freq_hz");

    std::mt19937_64 rng(spec.phase_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> phases(n_lines);
    for (auto& p : phases) p = phase(rng);

    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    Waveform w;
    w.sample_rate_hz = spec.sample_rate_hz;
    w.unit = unit;
    w.samples.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / spec.sample_rate_hz;
        double acc = 0.0;
        for (std::size_t i = 0; i < n_lines; ++i) {
            const double f = spec.line_spacing_hz * static_cast<double>(i + 1);
            acc += std::cos(2.0 * std::numbers::pi * f * t + phases[i]);
        }
        w.samples[k] = acc;
    }
    double peak = 0.0;
    for (double v : w.samples) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        const double scale = spec.amplitude / peak;
        for (auto& v : w.samples) v *= scale;
    }
    return w;
}

Waveform steady_state_window(const Waveform& w, double skip_s) {
    w.validate();
    if (skip_s < 0.0)
        throw parameter_error("steady_state_window: skip_s must be >= 0");
    // First index with t >= t0 + skip. The 1e-9 guard keeps an exact-grid
    // skip from rounding up to the next sample.
    auto start = static_cast<std::size_t>(
        std::max(0.0, std::ceil(skip_s * w.sample_rate_hz - 1e-9)));
    if (start >= w.samples.size())
        throw empty_window_error("steady_state_window: skip consumed the whole waveform");
    Waveform out;
    out.sample_rate_hz = w.sample_rate_hz;
    out.unit = w.unit;
    out.t0_s = w.t0_s + static_cast<double>(start) / w.sample_rate_hz;
    out.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(start), w.samples.end());
    return out;
}

}
