#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smasim/waveform.hpp"

namespace smasim {

/// Input/output record for identification: true actuation input vs the
/// distorted measurement.
struct SysIdDataset {
    Waveform input;
    Waveform output;

    double sample_rate_hz() const { return input.sample_rate_hz; }
    std::size_t size() const { return input.size(); }

    /// Equal lengths and equal sample rates, both non-empty.
    void validate() const;
};

enum class ModelKind { iir, fir };

/// Discrete-time rational transfer function
///   H(z) = (b0 + b1 z^-1 + ... ) / (1 + a1 z^-1 + ... ).
/// An IIR model cannot be constructed with denominator roots on or outside
/// the unit circle; FIR models carry an empty `a` and are always stable.
class LtiModel {
public:
    static LtiModel iir(std::vector<double> b, std::vector<double> a, double sample_rate_hz);
    static LtiModel fir(std::vector<double> b, double sample_rate_hz);

    ModelKind kind() const noexcept { return kind_; }
    const std::vector<double>& b() const noexcept { return b_; }
    const std::vector<double>& a() const noexcept { return a_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }

    nlohmann::json to_json() const;
    static LtiModel from_json(const nlohmann::json& j);

private:
    LtiModel(ModelKind kind, std::vector<double> b, std::vector<double> a, double fs);

    ModelKind kind_;
    std::vector<double> b_;
    std::vector<double> a_;
    double sample_rate_hz_;
};

struct FrequencyResponse {
    std::vector<double> freqs_hz;
    std::vector<double> magnitude_db;
    std::vector<double> phase_deg;  // unwrapped
    double valid_upto_hz = 0.0;
};

/// Radii of the denominator roots (companion-matrix eigenvalues).
std::vector<double> denominator_root_radii(std::span<const double> a);

/**
 * Equation-error (ARX) least squares with na = nb = order:
 * minimize sum_k (y_k + sum_i a_i y_{k-i} - sum_j b_j u_{k-j})^2 over the
 * 2*order+1 free coefficients, via a dense normal-equation solve with a
 * rank-revealing minimum-norm fallback on ill-conditioning. Throws
 * identifiability_error if the regressor is degenerate beyond recovery and
 * instability_error (with root radii) if the identified denominator is not
 * strictly stable.
 */
LtiModel fit_iir_ls(const SysIdDataset& data, std::size_t order);

/// Least-squares FIR tap fit, y_k ~ sum_j b_j u_{k-j}, j = 0..order.
LtiModel fit_fir_ls(const SysIdDataset& data, std::size_t order);

/// Evaluate H(e^{j 2 pi f / fs}) at the given frequencies (all < Nyquist).
/// Magnitude in dB, phase unwrapped in degrees.
FrequencyResponse frequency_response(const LtiModel& model, std::span<const double> freqs_hz);

/// DC gain: sum(b) / (1 + sum(a)); for FIR, the tap sum.
double static_gain(const LtiModel& model);

/// Highest spectral line whose DFT magnitude exceeds
/// floor_fraction * (largest line magnitude). Callers stamp the result into
/// FrequencyResponse.valid_upto_hz.
double excitation_bandwidth(const Waveform& input, double floor_fraction);

/// Direct-form difference-equation filtering with zero initial conditions.
Waveform apply_model(const LtiModel& model, const Waveform& x);

/// Low-frequency compensation: divide by the identified static gain.
Waveform compensate_static(const Waveform& measured, double gain);

}
