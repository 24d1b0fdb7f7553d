#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smasim {

/// One-sided DFT magnitudes on the natural bin grid k*fs/N, k = 0..N/2,
/// evaluated with Goertzel recurrences (no FFT length restrictions).
/// Magnitudes are normalized so a unit-amplitude cosine on a bin reads ~1.
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> magnitude;
};

Spectrum dft_magnitudes(std::span<const double> samples, double sample_rate_hz);

}
