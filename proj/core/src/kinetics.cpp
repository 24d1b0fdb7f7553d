#include "smasim/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smasim/errors.hpp"

namespace smasim {

namespace {

// Trend-reversal deadband, in degC. Filters chatter from numerical noise.
constexpr double kDeadbandC = 0.01;
constexpr double kMinBandC = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Heating segment anchored at (start temperature, start fraction): the
// remaining band [max(A_s, T_start), A_f] is traversed by one cosine half
// wave so xi is continuous through mid-band reversals.
double heating_xi(double T, double xi_start, double T_start, const KineticsSpec& k) {
    if (T >= k.A_f_C) return 0.0;
    const double lo = std::clamp(T_start, k.A_s_C, k.A_f_C);
    if (T <= lo) return xi_start;
    const double band = k.A_f_C - lo;
    if (band < kMinBandC) return T >= k.A_f_C ? 0.0 : xi_start;
    return clamp01(0.5 * xi_start * (std::cos(std::numbers::pi * (T - lo) / band) + 1.0));
}

// Cooling segment, mirrored: [M_f, min(M_s, T_start)] downwards to full
// martensite.
double cooling_xi(double T, double xi_start, double T_start, const KineticsSpec& k) {
    if (T <= k.M_f_C) return 1.0;
    const double hi = std::clamp(T_start, k.M_f_C, k.M_s_C);
    if (T >= hi) return xi_start;
    const double band = hi - k.M_f_C;
    if (band < kMinBandC) return T <= k.M_f_C ? 1.0 : xi_start;
    return clamp01(0.5 * (1.0 - xi_start) * std::cos(std::numbers::pi * (T - k.M_f_C) / band) +
                   0.5 * (1.0 + xi_start));
}

}  // namespace

void KineticsSpec::validate() const {
    if (!(M_f_C < M_s_C)) throw parameter_error("KineticsSpec: requires M_f_C < M_s_C");
    if (!(M_s_C <= A_s_C)) throw parameter_error("KineticsSpec: requires M_s_C <= A_s_C");
    if (!(A_s_C < A_f_C)) throw parameter_error("KineticsSpec: requires A_s_C < A_f_C");
    if (!(max_strain > 0.0 && max_strain <= 0.08))
        throw parameter_error("KineticsSpec.max_strain must be in (0, 0.08]");
}

void TransmissionSpec::validate() const {
    if (!(gain > 0.0)) throw parameter_error("TransmissionSpec.gain must be > 0");
    if (!(wire_length_m > 0.0)) throw parameter_error("TransmissionSpec.wire_length_m must be > 0");
}

PhaseState update_phase(const PhaseState& state, double T_C, const KineticsSpec& spec) {
    if (!(state.xi >= 0.0 && state.xi <= 1.0))
        throw parameter_error("PhaseState.xi must be in [0,1]");
    if (!std::isfinite(T_C))
        throw parameter_error("update_phase: temperature must be finite");

    PhaseState s = state;
    if (std::isnan(s.T_ref_C)) {
        // First sample only anchors the trend detector.
        s.T_ref_C = T_C;
        return s;
    }

    const auto begin_heating = [&](double from_T) {
        s.branch = Branch::heating;
        s.xi_at_branch_start = s.xi;
        s.T_branch_start_C = from_T;
        s.T_ref_C = T_C;
    };
    const auto begin_cooling = [&](double from_T) {
        s.branch = Branch::cooling;
        s.xi_at_branch_start = s.xi;
        s.T_branch_start_C = from_T;
        s.T_ref_C = T_C;
    };

    switch (s.branch) {
        case Branch::idle:
            if (T_C > s.T_ref_C + kDeadbandC) begin_heating(s.T_ref_C);
            else if (T_C < s.T_ref_C - kDeadbandC) begin_cooling(s.T_ref_C);
            break;
        case Branch::heating:
            if (T_C < s.T_ref_C - kDeadbandC) begin_cooling(s.T_ref_C);
            else s.T_ref_C = std::max(s.T_ref_C, T_C);
            break;
        case Branch::cooling:
            if (T_C > s.T_ref_C + kDeadbandC) begin_heating(s.T_ref_C);
            else s.T_ref_C = std::min(s.T_ref_C, T_C);
            break;
    }

    switch (s.branch) {
        case Branch::idle:
            break;
        case Branch::heating:
            s.xi = heating_xi(T_C, s.xi_at_branch_start, s.T_branch_start_C, spec);
            break;
        case Branch::cooling:
            s.xi = cooling_xi(T_C, s.xi_at_branch_start, s.T_branch_start_C, spec);
            break;
    }
    return s;
}

double displacement(double xi, const KineticsSpec& spec, const TransmissionSpec& trans) {
    if (!(xi >= 0.0 && xi <= 1.0))
        throw parameter_error("displacement: xi must be in [0,1]");
    return trans.bias_offset_m + trans.gain * spec.max_strain * trans.wire_length_m * (1.0 - xi);
}

}
