#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "smasim/errors.hpp"
#include "smasim/signal_gen.hpp"
#include "smasim/spectrum.hpp"
#include "smasim/waveform.hpp"

using namespace smasim;

namespace {

PwmSpec pwm_1hz(double duty, double duration_s = 1.0) {
    PwmSpec s;
    s.frequency_hz = 1.0;
    s.duty_fraction = duty;
    s.amplitude_volts = 2.7;
    s.sample_rate_hz = 1000.0;
    s.duration_s = duration_s;
    return s;
}

}  // namespace

TEST_CASE("pwm: zero duty is all zeros") {
    const Waveform w = generate_pwm(pwm_1hz(0.0));
    REQUIRE(w.size() == 1000);
    for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("pwm: full duty is a constant") {
    const Waveform w = generate_pwm(pwm_1hz(1.0));
    for (double v : w.samples) CHECK(v == 2.7);
    CHECK(w.unit == Unit::volts);
}

TEST_CASE("pwm: 7 % duty at 1 kHz matches direct enumeration") {
    const PwmSpec spec = pwm_1hz(0.07);
    const Waveform w = generate_pwm(spec);
    REQUIRE(w.size() == 1000);
    // Independent enumeration of frac(t*f) < DC on the sample grid.
    std::size_t on = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        const double phase =
            std::fmod(static_cast<double>(k) * spec.frequency_hz, spec.sample_rate_hz) /
            spec.sample_rate_hz;
        const bool expect_on = phase < spec.duty_fraction;
        CHECK(w.samples[k] == (expect_on ? 2.7 : 0.0));
        if (expect_on) ++on;
    }
    CHECK(on == 70);
    for (std::size_t k = 0; k < 70; ++k) CHECK(w.samples[k] == 2.7);
    for (std::size_t k = 70; k < 1000; ++k) CHECK(w.samples[k] == 0.0);
}

TEST_CASE("pwm: invalid specs name the violated field") {
    PwmSpec s = pwm_1hz(0.5);
    s.duty_fraction = 1.5;
    CHECK_THROWS_WITH_AS(generate_pwm(s), doctest::Contains("duty_fraction"), parameter_error);
    s = pwm_1hz(0.5);
    s.sample_rate_hz = 50.0;
    CHECK_THROWS_WITH_AS(generate_pwm(s), doctest::Contains("sample_rate_hz"), parameter_error);
    s = pwm_1hz(0.5);
    s.duration_s = 0.0;
    CHECK_THROWS_WITH_AS(generate_pwm(s), doctest::Contains("duration_s"), parameter_error);
}

TEST_CASE("pwm: ON fraction and mean track the duty cycle up to per-period quantization") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> duty(0.0, 1.0);
    std::uniform_int_distribution<int> freq(1, 5);
    for (int trial = 0; trial < 25; ++trial) {
        PwmSpec s;
        s.frequency_hz = freq(rng);
        s.duty_fraction = duty(rng);
        s.amplitude_volts = 2.7;
        s.sample_rate_hz = 1000.0;
        s.duration_s = 4.0;
        const Waveform w = generate_pwm(s);
        double on = 0.0, sum = 0.0;
        for (double v : w.samples) {
            if (v != 0.0) on += 1.0;
            sum += v;
        }
        const double n = static_cast<double>(w.size());
        // One sample of quantization per period plus one edge sample.
        const double bound = s.frequency_hz / s.sample_rate_hz + 1.0 / n;
        CHECK(std::abs(on / n - s.duty_fraction) <= bound);
        CHECK(std::abs(sum / n - s.amplitude_volts * s.duty_fraction) <=
              s.amplitude_volts * bound);
    }
}

TEST_CASE("multisine: single line is a unit-peak cosine") {
    MultisineSpec s;
    s.max_freq_hz = 1.0;
    s.line_spacing_hz = 1.0;
    s.amplitude = 1.0;
    s.sample_rate_hz = 1000.0;
    s.duration_s = 1.0;
    s.phase_seed = 7;
    const Waveform w = generate_multisine(s);
    double peak = 0.0;
    for (double v : w.samples) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));

    const Spectrum spec = dft_magnitudes(w.samples, w.sample_rate_hz);
    for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
        if (spec.freqs_hz[k] == 1.0) CHECK(spec.magnitude[k] > 0.5);
        else CHECK(spec.magnitude[k] < 1e-9);
    }
}

TEST_CASE("multisine: deterministic for a fixed seed") {
    MultisineSpec s;
    s.max_freq_hz = 5.0;
    s.line_spacing_hz = 0.25;
    s.amplitude = 2.0;
    s.sample_rate_hz = 500.0;
    s.duration_s = 4.0;
    s.phase_seed = 1234;
    const Waveform a = generate_multisine(s);
    const Waveform b = generate_multisine(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.samples[k] == b.samples[k]);

    s.phase_seed = 1235;
    const Waveform c = generate_multisine(s);
    bool identical = true;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.samples[k] != c.samples[k]) identical = false;
    CHECK_FALSE(identical);
}

TEST_CASE("multisine: spectrum occupies every line up to 5 Hz and nothing above") {
    MultisineSpec s;
    s.max_freq_hz = 5.0;
    s.line_spacing_hz = 0.25;
    s.amplitude = 1.0;
    s.sample_rate_hz = 100.0;
    s.duration_s = 4.0;  // exactly one fundamental period of the line grid
    s.phase_seed = 99;
    const Waveform w = generate_multisine(s);
    const Spectrum spec = dft_magnitudes(w.samples, w.sample_rate_hz);
    double max_mag = 0.0;
    for (double m : spec.magnitude) max_mag = std::max(max_mag, m);
    for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
        const double f = spec.freqs_hz[k];
        const bool on_grid = std::abs(f / 0.25 - std::round(f / 0.25)) < 1e-9;
        if (f > 0.0 && f <= 5.0 + 1e-9 && on_grid)
            CHECK(spec.magnitude[k] > 0.10 * max_mag);
        if (f > 5.0 + 1e-9)
            CHECK(spec.magnitude[k] < 0.01 * max_mag);
    }
}

TEST_CASE("multisine: zero lines rejected") {
    MultisineSpec s;
    s.max_freq_hz = 0.1;
    s.line_spacing_hz = 0.25;
    s.duration_s = 10.0;
    CHECK_THROWS_AS(generate_multisine(s), parameter_error);
}

TEST_CASE("steady-state window: 32 s run keeps 30 s of data") {
    const Waveform w = generate_pwm(pwm_1hz(0.07, 32.0));
    const Waveform win = steady_state_window(w, 2.0);
    CHECK(win.size() == 30000);
    CHECK(win.duration_s() == doctest::Approx(30.0));
    CHECK(win.t0_s == doctest::Approx(2.0));
    CHECK(win.unit == Unit::volts);
}

TEST_CASE("steady-state window: zero skip is the identity") {
    const Waveform w = generate_pwm(pwm_1hz(0.3));
    const Waveform win = steady_state_window(w, 0.0);
    REQUIRE(win.size() == w.size());
    CHECK(win.t0_s == w.t0_s);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(win.samples[k] == w.samples[k]);
}

TEST_CASE("steady-state window: sample counting") {
    Waveform w;
    w.sample_rate_hz = 100.0;
    w.unit = Unit::meters;
    w.samples.assign(1000, 1.0);  // 10 s
    CHECK(steady_state_window(w, 4.0).size() == 600);
    CHECK_THROWS_AS(steady_state_window(w, 10.0), empty_window_error);
    CHECK_THROWS_AS(steady_state_window(w, 12.0), empty_window_error);
}

TEST_CASE("steady-state window: two skips compose into one") {
    const Waveform w = generate_pwm(pwm_1hz(0.07, 8.0));
    const Waveform two = steady_state_window(steady_state_window(w, 1.25), 2.5);
    const Waveform one = steady_state_window(w, 3.75);
    REQUIRE(two.size() == one.size());
    CHECK(two.t0_s == doctest::Approx(one.t0_s));
    for (std::size_t k = 0; k < one.size(); ++k) CHECK(two.samples[k] == one.samples[k]);
}

TEST_CASE("waveform CSV: bit-exact round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    Waveform w;
    w.sample_rate_hz = 997.0;
    w.t0_s = 1.2345678901234567;
    w.unit = Unit::celsius;
    for (int k = 0; k < 200; ++k) w.samples.push_back(value(rng) * std::pow(10.0, k % 7 - 3));

    std::stringstream ss;
    write_waveform_csv(w, ss);
    const Waveform r = read_waveform_csv(ss);
    CHECK(r.unit == w.unit);
    CHECK(r.sample_rate_hz == w.sample_rate_hz);
    CHECK(r.t0_s == w.t0_s);
    REQUIRE(r.size() == w.size());
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(r.samples[k] == w.samples[k]);
}
