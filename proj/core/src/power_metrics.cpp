#include "smasim/power_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smasim/errors.hpp"
#include "smasim/signal_gen.hpp"

namespace smasim {

Waveform instantaneous_power(const Waveform& current, double resistance_ohm) {
    current.validate();
    require_unit(current, Unit::amperes, "instantaneous_power");
    if (!(resistance_ohm > 0.0))
        throw parameter_error("instantaneous_power: resistance_ohm must be > 0");
    Waveform p = current;
    p.unit = Unit::watts;
    for (auto& v : p.samples) v = v * v * resistance_ohm;
    return p;
}

PowerMetrics power_metrics(const Waveform& power, double skip_s, std::size_t prefilter_samples) {
    require_unit(power, Unit::watts, "power_metrics");
    const Waveform window = steady_state_window(power, skip_s);
    const std::size_t n = window.samples.size();

    double sum = 0.0;
    for (double v : window.samples) sum += v;

    double peak;
    if (prefilter_samples <= 1) {
        peak = window.samples.front();
        for (double v : window.samples) peak = std::max(peak, v);
    } else {
        // Centered moving average ahead of the peak search.
        const std::size_t half = prefilter_samples / 2;
        peak = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t lo = k >= half ? k - half : 0;
            const std::size_t hi = std::min(n - 1, k + half);
            double acc = 0.0;
            for (std::size_t j = lo; j <= hi; ++j) acc += window.samples[j];
            peak = std::max(peak, acc / static_cast<double>(hi - lo + 1));
        }
    }

    PowerMetrics m;
    // The clamp keeps P_a <= P_p when a constant window's mean rounds a ulp
    // above its max.
    m.P_a_W = std::min(sum / static_cast<double>(n), peak);
    m.P_p_W = peak;
    m.window_s = window.duration_s();
    return m;
}

StatSummary mean_esd(std::span<const double> values) {
    if (values.empty())
        throw parameter_error("mean_esd: empty value list");
    StatSummary s;
    s.n = values.size();
    bool all_equal = true;
    for (double v : values)
        if (v != values.front()) { all_equal = false; break; }
    if (all_equal) {
        // Exact zero spread for identical repeats; summing x n times and
        // dividing by n can otherwise leave one-ulp residue.
        s.mean = values.front();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.esd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

double percent_increase(double new_value_W, double base_value_W) {
    if (!(base_value_W > 0.0))
        throw parameter_error("percent_increase: base must be > 0");
    return 100.0 * (new_value_W - base_value_W) / base_value_W;
}

double peak_to_peak(std::span<const double> values) {
    if (values.empty())
        throw parameter_error("peak_to_peak: empty value list");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

}
