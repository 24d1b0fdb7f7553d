#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "smasim/actuator.hpp"
#include "smasim/waveform.hpp"

namespace smasim {

/// Synchronized per-step record of one simulation. Columns share one length;
/// time is strictly increasing.
struct SimTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> time_s;
    std::vector<double> voltage_V;
    std::vector<double> current_A;
    std::vector<double> power_W;
    std::vector<double> T_wire_C;
    std::vector<double> T_chamber_C;
    std::vector<double> xi;
    std::vector<double> displacement_m;

    double max_wire_temp_C = 0.0;
    std::size_t samples_above_warn = 0;   // wire hotter than the warn threshold
    std::size_t samples_extrapolated = 0; // above 100 degC in water (no boiling model)

    std::size_t size() const noexcept { return time_s.size(); }

    Waveform power_waveform() const;
    Waveform displacement_waveform() const;
    Waveform wire_temperature_waveform() const;
};

/// Default wire-temperature warning threshold. Exceeding it flags the trace;
/// nothing stops the simulation.
inline constexpr double kDefaultWarnTempC = 300.0;

/// Step the electro-thermal plant and phase kinetics along a voltage drive:
/// per sample, Joule power -> thermal step (two-node when a chamber is
/// configured) -> phase update -> output displacement. Initial state is
/// ambient temperature and full martensite.
SimTrace simulate_actuator(const ActuatorModel& model, const Waveform& drive,
                           double warn_temp_C = kDefaultWarnTempC);

/// Trace CSV: provenance header comments then one row per sample, 17
/// significant digits.
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path,
                     const std::string& config_hash);

}
