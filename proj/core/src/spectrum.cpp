#include "smasim/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "smasim/errors.hpp"

namespace smasim {

Spectrum dft_magnitudes(std::span<const double> samples, double sample_rate_hz) {
    if (samples.empty())
        throw parameter_error("dft_magnitudes: empty input");
    if (!(sample_rate_hz > 0.0))
        throw parameter_error("dft_magnitudes: sample_rate_hz must be > 0");

    const std::size_t n = samples.size();
    const std::size_t n_bins = n / 2 + 1;
    Spectrum spec;
    spec.freqs_hz.resize(n_bins);
    spec.magnitude.resize(n_bins);

    // Goertzel per bin: O(n) per bin with one cosine evaluation, no FFT
    // length restrictions. Fine for the signal lengths used here.
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        const double coeff = 2.0 * std::cos(w);
        double s_prev = 0.0, s_prev2 = 0.0;
        for (double x : samples) {
            const double s = x + coeff * s_prev - s_prev2;
            s_prev2 = s_prev;
            s_prev = s;
        }
        const double re = s_prev - s_prev2 * std::cos(w);
        const double im = s_prev2 * std::sin(w);
        double mag = std::sqrt(re * re + im * im);
        // Scale so a unit cosine exactly on a bin reads ~1 (DC and Nyquist
        // are not mirrored).
        const bool mirrored = k != 0 && !(n % 2 == 0 && k == n / 2);
        mag *= (mirrored ? 2.0 : 1.0) / static_cast<double>(n);
        spec.freqs_hz[k] = sample_rate_hz * static_cast<double>(k) / static_cast<double>(n);
        spec.magnitude[k] = mag;
    }
    return spec;
}

}
