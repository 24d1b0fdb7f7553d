#pragma once

#include <numbers>
#include <string>

#include "smasim/waveform.hpp"

namespace smasim {

/// SMA wire geometry and material plus the total circuit resistance
/// (SMA + power leads, lumped and temperature-independent).
struct WireSpec {
    double diameter_m = 38.1e-6;
    double length_m = 0.015;
    double density_kg_m3 = 6450.0;
    double specific_heat_J_kgK = 500.0;
    double resistance_ohm = 10.8;

    double cross_section_m2() const {
        return std::numbers::pi * diameter_m * diameter_m / 4.0;
    }
    double lateral_area_m2() const {
        return std::numbers::pi * diameter_m * length_m;
    }
    double mass_kg() const { return density_kg_m3 * cross_section_m2() * length_m; }
    double heat_capacity_J_K() const { return mass_kg() * specific_heat_J_kgK; }

    void validate() const;
};

/// Surrounding medium seen by the bare wire.
struct MediumSpec {
    std::string name = "air";
    double ambient_temp_C = 23.0;
    double h_W_m2K = 150.0;

    void validate() const;
};

/// Insulating chamber around the wire, lumped into two conductances in
/// series (wire surface -> chamber air -> outer medium) plus one heat
/// capacity for the enclosed air and wall.
struct ChamberSpec {
    double gap_conductance_W_K = 1.0e-2;
    double wall_conductance_W_K = 5.0e-3;
    double chamber_heat_capacity_J_K = 5.0e-2;

    void validate() const;
};

struct ThermalState {
    double T_wire_C = 23.0;
    double T_chamber_C = 23.0;  // equals ambient when no chamber is present
};

/// P = V^2 / R per sample, under ideal voltage drive. Input must carry the
/// volt tag; output carries watts.
Waveform electrical_power(const Waveform& drive, double resistance_ohm);

/// One step of m*c*dT/dt = P - h*A*(T - T_amb) with P held constant over dt,
/// integrated exactly: T+ = T_ss + (T - T_ss) * exp(-dt/tau). Unconditionally
/// stable for any dt.
ThermalState step_single_node(const ThermalState& state, double P_W, double dt_s,
                              const WireSpec& wire, const MediumSpec& medium);

/// Backward-Euler step of the coupled wire/chamber pair, solved exactly as a
/// 2x2 linear system:
///   m*c * dTw/dt = P - G_gap*(Tw - Tch)
///   C_ch * dTch/dt = G_gap*(Tw - Tch) - G_wall*(Tch - T_amb)
ThermalState step_two_node(const ThermalState& state, double P_W, double dt_s,
                           const WireSpec& wire, const MediumSpec& medium,
                           const ChamberSpec& chamber);

/// tau = m*c / (h*A). Independent of wire length (it cancels).
double thermal_time_constant(const WireSpec& wire, const MediumSpec& medium);

}
