#pragma once

#include <limits>

namespace smasim {

/// Zero-stress transformation temperatures and recoverable strain.
/// Cooling transforms austenite -> martensite through [M_s, M_f] (downwards),
/// heating transforms back through [A_s, A_f].
struct KineticsSpec {
    double M_f_C = 65.0;
    double M_s_C = 75.0;
    double A_s_C = 85.0;
    double A_f_C = 95.0;
    double max_strain = 0.04;

    void validate() const;
};

enum class Branch { idle, heating, cooling };

/// Martensite-fraction tracker with minor-loop support. `xi_at_branch_start`
/// and `T_branch_start_C` anchor the cosine segment of the active branch;
/// `T_ref_C` is the running temperature extremum used for trend detection.
struct PhaseState {
    double xi = 1.0;
    Branch branch = Branch::idle;
    double xi_at_branch_start = 1.0;
    double T_branch_start_C = std::numeric_limits<double>::quiet_NaN();
    double T_ref_C = std::numeric_limits<double>::quiet_NaN();
};

/// Output displacement per unit wire contraction. Antagonistic-load effects
/// are folded into `gain`.
struct TransmissionSpec {
    double gain = 4.0;
    double wire_length_m = 0.015;
    double bias_offset_m = 0.0;

    void validate() const;
};

/// Advance the martensite fraction to temperature T_C using cosine kinetics
/// with two hysteresis branches. The branch switches when the temperature
/// trend reverses by more than a 0.01 degC deadband; reversals inside a
/// transformation band rescale the remaining band so xi stays continuous.
/// Rate independent: only the sequence of temperatures matters.
PhaseState update_phase(const PhaseState& state, double T_C, const KineticsSpec& spec);

/// bias + gain * max_strain * L * (1 - xi). Full austenite (xi = 0) gives the
/// maximum stroke.
double displacement(double xi, const KineticsSpec& spec, const TransmissionSpec& trans);

}
