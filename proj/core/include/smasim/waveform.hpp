#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace smasim {

/// Physical unit carried by a waveform.
enum class Unit { volts, amperes, watts, celsius, meters };

std::string_view unit_tag(Unit u);
Unit unit_from_tag(std::string_view tag);

/// Uniformly sampled time series of one physical quantity.
struct Waveform {
    double sample_rate_hz = 0.0;
    double t0_s = 0.0;
    Unit unit = Unit::volts;
    std::vector<double> samples;

    std::size_t size() const noexcept { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    double time_at(std::size_t k) const { return t0_s + static_cast<double>(k) / sample_rate_hz; }

    /// Throws parameter_error unless sample count >= 1 and sample_rate_hz > 0.
    void validate() const;
};

/// Requires `w.unit == expected`, otherwise throws unit_error naming both tags.
void require_unit(const Waveform& w, Unit expected, std::string_view op);

/// Two-column CSV with `# unit:`, `# sample_rate_hz:` and `# t0_s:` header
/// lines; values at 17 significant digits so a read reproduces the waveform
/// bit-exactly.
void write_waveform_csv(const Waveform& w, std::ostream& os);
void write_waveform_csv(const Waveform& w, const std::filesystem::path& path);
Waveform read_waveform_csv(std::istream& is);
Waveform read_waveform_csv(const std::filesystem::path& path);

}
