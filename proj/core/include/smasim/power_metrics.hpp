#pragma once

#include <cstddef>
#include <span>

#include "smasim/waveform.hpp"

namespace smasim {

/// Average and peak power over an analysis window.
struct PowerMetrics {
    double P_a_W = 0.0;
    double P_p_W = 0.0;
    double window_s = 0.0;
};

/// Mean and experimental standard deviation (sample std, n-1 denominator;
/// zero for a single value).
struct StatSummary {
    double mean = 0.0;
    double esd = 0.0;
    std::size_t n = 0;
};

/// P = I^2 * R per sample. Input must carry the ampere tag.
Waveform instantaneous_power(const Waveform& current, double resistance_ohm);

/// Mean and max of a power waveform after dropping the first skip_s seconds.
/// `prefilter_samples` applies a centered moving average before the peak
/// search; 0 (the default) keeps the raw discrete maximum.
PowerMetrics power_metrics(const Waveform& power, double skip_s,
                           std::size_t prefilter_samples = 0);

StatSummary mean_esd(std::span<const double> values);

/// 100 * (new - base) / base. Throws parameter_error for base <= 0.
double percent_increase(double new_value_W, double base_value_W);

/// max - min of a sample range (displacement amplitude and the like).
double peak_to_peak(std::span<const double> values);

}
