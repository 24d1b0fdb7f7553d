#include "smasim/waveform.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smasim/errors.hpp"
#include "smasim/text_io.hpp"

namespace smasim {

std::string_view unit_tag(Unit u) {
    switch (u) {
        case Unit::volts: return "V";
        case Unit::amperes: return "A";
        case Unit::watts: return "W";
        case Unit::celsius: return "°C";
        case Unit::meters: return "m";
    }
    return "?";
}

Unit unit_from_tag(std::string_view tag) {
    if (tag == "V") return Unit::volts;
    if (tag == "A") return Unit::amperes;
    if (tag == "W") return Unit::watts;
    if (tag == "°C" || tag == "degC") return Unit::celsius;
    if (tag == "m") return Unit::meters;
    throw parameter_error("unknown unit tag: '" + std::string(tag) + "'");
}

void Waveform::validate() const {
    if (!(sample_rate_hz > 0.0))
        throw parameter_error("Waveform.sample_rate_hz must be > 0");
    if (samples.empty())
        throw parameter_error("Waveform.samples must hold at least one sample");
}

void require_unit(const Waveform& w, Unit expected, std::string_view op) {
    if (w.unit != expected)
        throw unit_error(std::string(op) + ": expected unit " + std::string(unit_tag(expected)) +
                         ", got " + std::string(unit_tag(w.unit)));
}

void write_waveform_csv(const Waveform& w, std::ostream& os) {
    w.validate();
    os << "# unit: " << unit_tag(w.unit) << "\n";
    os << "# sample_rate_hz: " << g17(w.sample_rate_hz) << "\n";
    os << "# t0_s: " << g17(w.t0_s) << "\n";
    os << "time_s,value\n";
    for (std::size_t k = 0; k < w.samples.size(); ++k)
        os << g17(w.time_at(k)) << ',' << g17(w.samples[k]) << "\n";
}

void write_waveform_csv(const Waveform& w, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path.string());
    write_waveform_csv(w, os);
    if (!os) throw io_error("short write: " + path.string());
}

Waveform read_waveform_csv(std::istream& is) {
    Waveform w;
    w.sample_rate_hz = 0.0;
    bool have_unit = false;
    bool have_header = false;
    std::string line;
    std::vector<double> times;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# unit:", 0) == 0) {
            std::string tag = line.substr(7);
            tag.erase(0, tag.find_first_not_of(' '));
            w.unit = unit_from_tag(tag);
            have_unit = true;
            continue;
        }
        if (line.rfind("# sample_rate_hz:", 0) == 0) {
            w.sample_rate_hz = parse_double(std::string_view(line).substr(17));
            continue;
        }
        if (line.rfind("# t0_s:", 0) == 0) {
            w.t0_s = parse_double(std::string_view(line).substr(7));
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            if (line != "time_s,value")
                throw io_error("waveform CSV: unexpected header '" + line + "'");
            have_header = true;
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != 2)
            throw io_error("waveform CSV: expected 2 columns, got " + std::to_string(fields.size()));
        times.push_back(parse_double(fields[0]));
        w.samples.push_back(parse_double(fields[1]));
    }
    if (!have_unit) throw io_error("waveform CSV: missing '# unit:' header");
    if (w.samples.empty()) throw io_error("waveform CSV: no samples");
    if (!(w.sample_rate_hz > 0.0)) {
        // Legacy two-column file: infer the rate from the first time step.
        if (times.size() < 2) throw io_error("waveform CSV: cannot infer sample rate");
        w.sample_rate_hz = 1.0 / (times[1] - times[0]);
        w.t0_s = times[0];
    }
    return w;
}

Waveform read_waveform_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open for reading: " + path.string());
    return read_waveform_csv(is);
}

}
