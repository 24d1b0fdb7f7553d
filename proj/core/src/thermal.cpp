#include "smasim/thermal.hpp"

#include <cmath>

#include "smasim/errors.hpp"

namespace smasim {

void WireSpec::validate() const {
    if (!(diameter_m > 0.0)) throw parameter_error("WireSpec.diameter_m must be > 0");
    if (!(length_m > 0.0)) throw parameter_error("WireSpec.length_m must be > 0");
    if (!(diameter_m < length_m)) throw parameter_error("WireSpec.diameter_m must be < length_m");
    if (!(density_kg_m3 > 0.0)) throw parameter_error("WireSpec.density_kg_m3 must be > 0");
    if (!(specific_heat_J_kgK > 0.0)) throw parameter_error("WireSpec.specific_heat_J_kgK must be > 0");
    if (!(resistance_ohm > 0.0)) throw parameter_error("WireSpec.resistance_ohm must be > 0");
}

void MediumSpec::validate() const {
    if (!(h_W_m2K > 0.0)) throw parameter_error("MediumSpec.h_W_m2K must be > 0");
    if (!(ambient_temp_C >= -20.0 && ambient_temp_C <= 100.0))
        throw parameter_error("MediumSpec.ambient_temp_C must be in [-20,100]");
}

void ChamberSpec::validate() const {
    if (!(gap_conductance_W_K > 0.0))
        throw parameter_error("ChamberSpec.gap_conductance_W_K must be > 0");
    if (!(wall_conductance_W_K > 0.0))
        throw parameter_error("ChamberSpec.wall_conductance_W_K must be > 0");
    if (!(chamber_heat_capacity_J_K > 0.0))
        throw parameter_error("ChamberSpec.chamber_heat_capacity_J_K must be > 0");
}

Waveform electrical_power(const Waveform& drive, double resistance_ohm) {
    drive.validate();
    require_unit(drive, Unit::volts, "electrical_power");
    if (!(resistance_ohm > 0.0))
        throw parameter_error("electrical_power: resistance_ohm must be > 0");
    Waveform p = drive;
    p.unit = Unit::watts;
    for (auto& v : p.samples) v = v * v / resistance_ohm;
    return p;
}

ThermalState step_single_node(const ThermalState& state, double P_W, double dt_s,
                              const WireSpec& wire, const MediumSpec& medium) {
    if (!(dt_s > 0.0)) throw parameter_error("step_single_node: dt_s must be > 0");
    if (!(P_W >= 0.0)) throw parameter_error("step_single_node: P_W must be >= 0");
    const double hA = medium.h_W_m2K * wire.lateral_area_m2();
    const double tau = wire.heat_capacity_J_K() / hA;
    const double T_ss = medium.ambient_temp_C + P_W / hA;
    ThermalState next = state;
    next.T_wire_C = T_ss + (state.T_wire_C - T_ss) * std::exp(-dt_s / tau);
    next.T_chamber_C = medium.ambient_temp_C;
    return next;
}

ThermalState step_two_node(const ThermalState& state, double P_W, double dt_s,
                           const WireSpec& wire, const MediumSpec& medium,
                           const ChamberSpec& chamber) {
    if (!(dt_s > 0.0)) throw parameter_error("step_two_node: dt_s must be > 0");
    const double mc = wire.heat_capacity_J_K();
    const double a = dt_s / mc;
    const double b = dt_s / chamber.chamber_heat_capacity_J_K;
    const double g = chamber.gap_conductance_W_K;
    const double w = chamber.wall_conductance_W_K;

    // (I - dt*A) x+ = x + dt*f0
    const double m00 = 1.0 + a * g;
    const double m01 = -a * g;
    const double m10 = -b * g;
    const double m11 = 1.0 + b * (g + w);
    const double det = m00 * m11 - m01 * m10;
    if (!(std::abs(det) > 1e-300))
        throw numeric_error("step_two_node: singular step matrix");

    const double r0 = state.T_wire_C + a * P_W;
    const double r1 = state.T_chamber_C + b * w * medium.ambient_temp_C;
    ThermalState next;
    next.T_wire_C = (m11 * r0 - m01 * r1) / det;
    next.T_chamber_C = (-m10 * r0 + m00 * r1) / det;
    return next;
}

double thermal_time_constant(const WireSpec& wire, const MediumSpec& medium) {
    wire.validate();
    medium.validate();
    return wire.heat_capacity_J_K() / (medium.h_W_m2K * wire.lateral_area_m2());
}

}
