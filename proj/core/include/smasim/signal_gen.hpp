#pragma once

#include <cstdint>

#include "smasim/waveform.hpp"

namespace smasim {

/// Low-frequency PWM drive description. The sample rate must oversample the
/// fundamental by at least 100x so duty quantization stays below 1 %.
struct PwmSpec {
    double frequency_hz = 1.0;
    double duty_fraction = 0.07;
    double amplitude_volts = 2.7;
    double sample_rate_hz = 1000.0;
    double duration_s = 32.0;

    void validate() const;
};

/// Equal-amplitude cosine lines on a uniform grid with seeded random phases.
struct MultisineSpec {
    double max_freq_hz = 5.0;
    double line_spacing_hz = 0.25;
    double amplitude = 1.0;
    double sample_rate_hz = 1000.0;
    double duration_s = 4.0;
    std::uint64_t phase_seed = 0;

    void validate() const;
};

/// Ideal square PWM: sample k (at t = k/fs) is ON iff frac(t*f) < duty.
/// The ON segment starts each period; edges are ideal.
Waveform generate_pwm(const PwmSpec& spec);

/// Sum of cosines at {d, 2d, ..., max_freq} with phases drawn from
/// phase_seed, rescaled so the peak sample magnitude equals `amplitude`.
/// Deterministic for a fixed seed.
Waveform generate_multisine(const MultisineSpec& spec, Unit unit = Unit::volts);

/// Drops everything before t0 + skip_s. Unit and sample rate are preserved,
/// t0 advances to the first kept sample. Throws empty_window_error when the
/// skip consumes the whole waveform.
Waveform steady_state_window(const Waveform& w, double skip_s);

}
