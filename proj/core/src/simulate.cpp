#include "smasim/simulate.hpp"

#include <fstream>

#include "smasim/errors.hpp"
#include "smasim/text_io.hpp"
#include "smasim/version.hpp"

namespace smasim {

namespace {

Waveform column_waveform(const SimTrace& t, const std::vector<double>& col, Unit unit) {
    Waveform w;
    w.sample_rate_hz = t.sample_rate_hz;
    w.t0_s = t.time_s.empty() ? 0.0 : t.time_s.front();
    w.unit = unit;
    w.samples = col;
    return w;
}

}  // namespace

Waveform SimTrace::power_waveform() const { return column_waveform(*this, power_W, Unit::watts); }
Waveform SimTrace::displacement_waveform() const {
    return column_waveform(*this, displacement_m, Unit::meters);
}
Waveform SimTrace::wire_temperature_waveform() const {
    return column_waveform(*this, T_wire_C, Unit::celsius);
}

SimTrace simulate_actuator(const ActuatorModel& model, const Waveform& drive, double warn_temp_C) {
    model.validate();
    drive.validate();
    require_unit(drive, Unit::volts, "simulate_actuator");

    const std::size_t n = drive.size();
    const double dt = 1.0 / drive.sample_rate_hz;
    const double R = model.wire.resistance_ohm;
    const bool in_water = model.medium.name == "water";

    SimTrace trace;
    trace.sample_rate_hz = drive.sample_rate_hz;
    trace.time_s.resize(n);
    trace.voltage_V.resize(n);
    trace.current_A.resize(n);
    trace.power_W.resize(n);
    trace.T_wire_C.resize(n);
    trace.T_chamber_C.resize(n);
    trace.xi.resize(n);
    trace.displacement_m.resize(n);

    ThermalState thermal{model.medium.ambient_temp_C, model.medium.ambient_temp_C};
    PhaseState phase;  // full martensite, idle
    trace.max_wire_temp_C = thermal.T_wire_C;

    for (std::size_t k = 0; k < n; ++k) {
        const double v = drive.samples[k];
        const double p = v * v / R;
        thermal = model.chamber
                      ? step_two_node(thermal, p, dt, model.wire, model.medium, *model.chamber)
                      : step_single_node(thermal, p, dt, model.wire, model.medium);
        phase = update_phase(phase, thermal.T_wire_C, model.kinetics);

        trace.time_s[k] = drive.time_at(k);
        trace.voltage_V[k] = v;
        trace.current_A[k] = v / R;
        trace.power_W[k] = p;
        trace.T_wire_C[k] = thermal.T_wire_C;
        trace.T_chamber_C[k] = thermal.T_chamber_C;
        trace.xi[k] = phase.xi;
        trace.displacement_m[k] = displacement(phase.xi, model.kinetics, model.transmission);

        trace.max_wire_temp_C = std::max(trace.max_wire_temp_C, thermal.T_wire_C);
        if (thermal.T_wire_C > warn_temp_C) ++trace.samples_above_warn;
        if (in_water && thermal.T_wire_C > 100.0) ++trace.samples_extrapolated;
    }
    return trace;
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path,
                     const std::string& config_hash) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path.string());
    os << "# smasim trace v1\n";
    os << "# tool_version: " << kToolVersion << "\n";
    os << "# config_hash: " << config_hash << "\n";
    os << "# sample_rate_hz: " << g17(trace.sample_rate_hz) << "\n";
    os << "time_s,voltage_V,current_A,power_W,T_wire_C,T_chamber_C,xi,displacement_m\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        os << g17(trace.time_s[k]) << ',' << g17(trace.voltage_V[k]) << ','
           << g17(trace.current_A[k]) << ',' << g17(trace.power_W[k]) << ','
           << g17(trace.T_wire_C[k]) << ',' << g17(trace.T_chamber_C[k]) << ','
           << g17(trace.xi[k]) << ',' << g17(trace.displacement_m[k]) << "\n";
    }
    if (!os) throw io_error("short write: " + path.string());
}

}
