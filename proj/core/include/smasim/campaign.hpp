#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smasim/actuator.hpp"
#include "smasim/power_metrics.hpp"

namespace smasim {

/// One tested medium: the surrounding fluid, the drive amplitude
/// used in it, and whether the plant's chamber is active.
struct CampaignMedium {
    MediumSpec medium;
    double amplitude_volts = 2.7;
    bool use_chamber = false;
};

struct PwmPair {
    double f_hz = 1.0;
    double duty_pct = 7.0;
};

/// The five frequency/duty pairs of the standard characterization protocol.
std::vector<PwmPair> protocol_pairs();

/// Campaign configuration: plant, drive grid and repeat protocol.
/// Repeat-to-repeat variability enters as seeded multiplicative noise on the
/// convective coefficient; noise_level = 0 recovers pure determinism.
struct ScenarioConfig {
    ActuatorModel plant;
    std::vector<CampaignMedium> media;
    double sample_rate_hz = 1000.0;
    double duration_s = 32.0;
    double skip_s = 2.0;
    int repeats = 5;
    std::uint64_t noise_seed = 1;
    double noise_level = 0.02;

    void validate() const;
};

/// Metrics of a single run (one medium, one PWM pair, one repeat).
struct CampaignRun {
    std::string medium;
    double f_hz = 0.0;
    double duty_pct = 0.0;
    int run_idx = 0;
    double P_a_W = 0.0;
    double P_p_W = 0.0;
    double amp_m = 0.0;
};

/// Cross-run summary for one (pair, medium) combination.
struct CampaignRow {
    std::string medium;
    double f_hz = 0.0;
    double duty_pct = 0.0;
    StatSummary P_a;
    StatSummary P_p;
    StatSummary amp;
};

struct CampaignResult {
    std::vector<CampaignRun> runs;
    std::vector<CampaignRow> rows;
    std::string config_hash;
    std::string plant_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
};

inline constexpr const char* kCampaignSchema = "smasim/campaign-v1";

/// Simulate every (pair, medium, repeat) combination and summarize. Repeats
/// run in parallel up to SMA_SIM_THREADS; results are deterministic for a
/// fixed seed regardless of thread count.
CampaignResult run_campaign(const ScenarioConfig& config, const std::vector<PwmPair>& pairs);

/// Write campaign.csv (per-run rows), summary.csv (per-combination rows),
/// summary.json and the SVG plots into out_dir. Throws io_error on failure
/// and refuses to write an empty result.
void write_report(const CampaignResult& result, const ScenarioConfig& config,
                  const std::filesystem::path& out_dir);

/// Re-read a campaign.csv written by write_report (used by `compare`).
struct CampaignCsv {
    std::vector<CampaignRun> runs;
    std::string config_hash;
    std::string plant_hash;
};
CampaignCsv read_campaign_csv(const std::filesystem::path& path);

nlohmann::json campaign_config_to_json(const ScenarioConfig& config,
                                       const std::vector<PwmPair>& pairs);
void campaign_config_from_json(const nlohmann::json& j, ScenarioConfig& config,
                               std::vector<PwmPair>& pairs);

}
