#include "smasim/campaign.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "smasim/errors.hpp"
#include "smasim/signal_gen.hpp"
#include "smasim/simulate.hpp"
#include "smasim/svg_plot.hpp"
#include "smasim/text_io.hpp"
#include "smasim/version.hpp"

namespace smasim {

std::vector<PwmPair> protocol_pairs() {
    return {{1.0, 7.0}, {2.0, 8.0}, {3.0, 9.0}, {4.0, 10.0}, {5.0, 10.0}};
}

void ScenarioConfig::validate() const {
    plant.validate();
    if (media.empty()) throw parameter_error("ScenarioConfig: at least one medium required");
    for (const auto& m : media) {
        m.medium.validate();
        if (!(m.amplitude_volts >= 0.0))
            throw parameter_error("ScenarioConfig: amplitude_volts must be >= 0");
        if (m.use_chamber && !plant.chamber)
            throw parameter_error("ScenarioConfig: medium requests a chamber the plant lacks");
    }
    for (std::size_t i = 0; i < media.size(); ++i)
        for (std::size_t j = i + 1; j < media.size(); ++j)
            if (media[i].medium.name == media[j].medium.name)
                throw parameter_error("ScenarioConfig: duplicate medium name '" +
                                      media[i].medium.name + "'");
    if (repeats < 1) throw parameter_error("ScenarioConfig: repeats must be >= 1");
    if (!(skip_s >= 0.0 && skip_s < duration_s))
        throw parameter_error("ScenarioConfig: requires 0 <= skip_s < duration_s");
    if (!(noise_level >= 0.0)) throw parameter_error("ScenarioConfig: noise_level must be >= 0");
    if (!(sample_rate_hz > 0.0)) throw parameter_error("ScenarioConfig: sample_rate_hz must be > 0");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic standard normal from a (seed, medium, pair, run) tuple,
// independent of execution order and platform RNG internals.
double seeded_normal(std::uint64_t seed, std::uint64_t mi, std::uint64_t pi, std::uint64_t ri) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(mi + 1) ^ splitmix64((pi + 1) << 20) ^
                                 splitmix64((ri + 1) << 40));
    const double u1 = (static_cast<double>(splitmix64(s) >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(splitmix64(s + 1) >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void parallel_for(std::size_t n, unsigned max_threads, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<unsigned>(max_threads, static_cast<unsigned>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

CampaignResult run_campaign(const ScenarioConfig& config, const std::vector<PwmPair>& pairs) {
    config.validate();
    if (pairs.empty()) throw parameter_error("run_campaign: no PWM pairs");

    struct Task {
        std::size_t mi, pi;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t mi = 0; mi < config.media.size(); ++mi)
        for (std::size_t pi = 0; pi < pairs.size(); ++pi)
            for (int run = 0; run < config.repeats; ++run) tasks.push_back({mi, pi, run});

    std::vector<CampaignRun> runs(tasks.size());
    parallel_for(tasks.size(), max_sim_threads(), [&](std::size_t t) {
        const Task& task = tasks[t];
        const CampaignMedium& cm = config.media[task.mi];
        const PwmPair& pair = pairs[task.pi];
        try {
            ActuatorModel model = config.plant;
            model.medium = cm.medium;
            if (!cm.use_chamber) model.chamber.reset();
            if (config.noise_level > 0.0) {
                const double z = seeded_normal(config.noise_seed, task.mi, task.pi,
                                               static_cast<std::uint64_t>(task.run));
                model.medium.h_W_m2K *= std::max(0.05, 1.0 + config.noise_level * z);
            }
            PwmSpec drive;
            drive.frequency_hz = pair.f_hz;
            drive.duty_fraction = pair.duty_pct / 100.0;
            drive.amplitude_volts = cm.amplitude_volts;
            drive.sample_rate_hz = config.sample_rate_hz;
            drive.duration_s = config.duration_s;

            const SimTrace trace = simulate_actuator(model, generate_pwm(drive));
            const PowerMetrics pm = power_metrics(trace.power_waveform(), config.skip_s);
            const Waveform disp = steady_state_window(trace.displacement_waveform(), config.skip_s);
            runs[t] = {cm.medium.name, pair.f_hz,         pair.duty_pct, task.run,
                       pm.P_a_W,       pm.P_p_W,          peak_to_peak(disp.samples)};
        } catch (const error& e) {
            throw error("pair " + std::to_string(task.pi) + " (" + cm.medium.name + ", run " +
                        std::to_string(task.run) + "): " + e.what());
        }
    });

    CampaignResult result;
    result.runs = std::move(runs);
    for (std::size_t mi = 0; mi < config.media.size(); ++mi) {
        for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
            std::vector<double> pa, pp, amp;
            for (const auto& r : result.runs) {
                if (r.medium == config.media[mi].medium.name && r.f_hz == pairs[pi].f_hz &&
                    r.duty_pct == pairs[pi].duty_pct) {
                    pa.push_back(r.P_a_W);
                    pp.push_back(r.P_p_W);
                    amp.push_back(r.amp_m);
                }
            }
            CampaignRow row;
            row.medium = config.media[mi].medium.name;
            row.f_hz = pairs[pi].f_hz;
            row.duty_pct = pairs[pi].duty_pct;
            row.P_a = mean_esd(pa);
            row.P_p = mean_esd(pp);
            row.amp = mean_esd(amp);
            result.rows.push_back(std::move(row));
        }
    }
    result.config_hash = fnv1a_hex(campaign_config_to_json(config, pairs).dump());
    result.plant_hash = plant_hash(config.plant);
    result.seed = config.noise_seed;
    result.tool_version = kToolVersion;
    return result;
}

namespace {

void write_provenance(std::ostream& os, const CampaignResult& r, const char* kind) {
    os << "# smasim " << kind << " v1\n";
    os << "# tool_version: " << r.tool_version << "\n";
    os << "# config_hash: " << r.config_hash << "\n";
    os << "# plant_hash: " << r.plant_hash << "\n";
    os << "# seed: " << r.seed << "\n";
}

void write_campaign_csv(const CampaignResult& r, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path.string());
    write_provenance(os, r, "campaign");
    os << "medium,f_hz,duty_pct,run_idx,P_a_W,P_p_W,amp_m\n";
    for (const auto& run : r.runs)
        os << run.medium << ',' << g17(run.f_hz) << ',' << g17(run.duty_pct) << ',' << run.run_idx
           << ',' << g17(run.P_a_W) << ',' << g17(run.P_p_W) << ',' << g17(run.amp_m) << "\n";
    if (!os) throw io_error("short write: " + path.string());
}

void write_summary_csv(const CampaignResult& r, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path.string());
    write_provenance(os, r, "summary");
    os << "medium,f_hz,duty_pct,n,P_a_mean_W,P_a_esd_W,P_p_mean_W,P_p_esd_W,amp_mean_m,amp_esd_m\n";
    for (const auto& row : r.rows)
        os << row.medium << ',' << g17(row.f_hz) << ',' << g17(row.duty_pct) << ',' << row.P_a.n
           << ',' << g17(row.P_a.mean) << ',' << g17(row.P_a.esd) << ',' << g17(row.P_p.mean)
           << ',' << g17(row.P_p.esd) << ',' << g17(row.amp.mean) << ',' << g17(row.amp.esd)
           << "\n";
    if (!os) throw io_error("short write: " + path.string());
}

void write_summary_json(const CampaignResult& r, const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"medium", row.medium},
                        {"f_hz", row.f_hz},
                        {"duty_pct", row.duty_pct},
                        {"n", row.P_a.n},
                        {"P_a_mean_W", row.P_a.mean},
                        {"P_a_esd_W", row.P_a.esd},
                        {"P_p_mean_W", row.P_p.mean},
                        {"P_p_esd_W", row.P_p.esd},
                        {"amp_mean_m", row.amp.mean},
                        {"amp_esd_m", row.amp.esd}});
    nlohmann::json j{{"schema", "smasim/summary-v1"},
                     {"tool_version", r.tool_version},
                     {"config_hash", r.config_hash},
                     {"plant_hash", r.plant_hash},
                     {"seed", r.seed},
                     {"rows", rows}};
    write_text_file(path, j.dump(2) + "\n");
}

void write_power_plot(const CampaignResult& r, const std::string& medium,
                      const std::filesystem::path& path) {
    PlotSeries pa{"P_a mean +/- ESD", {}, {}, {}, "#1f77b4", true};
    PlotSeries pp{"P_p mean +/- ESD", {}, {}, {}, "#d62728", true};
    for (const auto& row : r.rows) {
        if (row.medium != medium) continue;
        pa.x.push_back(row.f_hz);
        pa.y.push_back(row.P_a.mean);
        pa.yerr.push_back(row.P_a.esd);
        pp.x.push_back(row.f_hz);
        pp.y.push_back(row.P_p.mean);
        pp.yerr.push_back(row.P_p.esd);
    }
    PlotSpec spec;
    spec.title = "Power consumption in " + medium;
    spec.xlabel = "PWM frequency (Hz)";
    spec.ylabel = "power (W)";
    spec.comment = "config_hash: " + r.config_hash;
    spec.log_y = true;
    write_svg_plot(path, spec, {pa, pp});
}

void write_trace_plot(const ScenarioConfig& config, const CampaignMedium& cm, const PwmPair& pair,
                      const std::string& config_hash, const std::filesystem::path& path) {
    ActuatorModel model = config.plant;
    model.medium = cm.medium;
    if (!cm.use_chamber) model.chamber.reset();
    PwmSpec drive;
    drive.frequency_hz = pair.f_hz;
    drive.duty_fraction = pair.duty_pct / 100.0;
    drive.amplitude_volts = cm.amplitude_volts;
    drive.sample_rate_hz = config.sample_rate_hz;
    drive.duration_s = config.duration_s;
    const SimTrace trace = simulate_actuator(model, generate_pwm(drive));

    // Three seconds of steady-state response.
    const double t_lo = config.skip_s;
    const double t_hi = std::min(config.duration_s, config.skip_s + 3.0);
    PlotSeries disp{"displacement (mm)", {}, {}, {}, "#2ca02c", false};
    PlotSeries power{"P(t) (W)", {}, {}, {}, "#d62728", false};
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.time_s[k] < t_lo || trace.time_s[k] > t_hi) continue;
        disp.x.push_back(trace.time_s[k]);
        disp.y.push_back(trace.displacement_m[k] * 1e3);
        power.x.push_back(trace.time_s[k]);
        power.y.push_back(trace.power_W[k]);
    }
    PlotSpec spec;
    spec.title = "Response and power in " + cm.medium.name + " (" + g10(pair.f_hz) + " Hz, DC " +
                 g10(pair.duty_pct) + " %)";
    spec.xlabel = "time (s)";
    spec.ylabel = "displacement (mm) / power (W)";
    spec.comment = "config_hash: " + config_hash;
    write_svg_plot(path, spec, {disp, power});
}

}  // namespace

void write_report(const CampaignResult& result, const ScenarioConfig& config,
                  const std::filesystem::path& out_dir) {
    if (result.runs.empty() || result.rows.empty())
        throw parameter_error("write_report: empty campaign result");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create directory: " + out_dir.string());

    write_campaign_csv(result, out_dir / "campaign.csv");
    write_summary_csv(result, out_dir / "summary.csv");
    write_summary_json(result, out_dir / "summary.json");

    std::vector<PwmPair> pairs;
    for (const auto& row : result.rows) {
        if (row.medium != result.rows.front().medium) break;
        pairs.push_back({row.f_hz, row.duty_pct});
    }
    for (const auto& cm : config.media) {
        write_power_plot(result, cm.medium.name, out_dir / ("power_" + cm.medium.name + ".svg"));
        if (!pairs.empty())
            write_trace_plot(config, cm, pairs.front(), result.config_hash,
                             out_dir / ("trace_" + cm.medium.name + ".svg"));
    }
}

CampaignCsv read_campaign_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open for reading: " + path.string());
    CampaignCsv out;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# config_hash:", 0) == 0) {
            out.config_hash = line.substr(15);
            continue;
        }
        if (line.rfind("# plant_hash:", 0) == 0) {
            out.plant_hash = line.substr(14);
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            if (line != "medium,f_hz,duty_pct,run_idx,P_a_W,P_p_W,amp_m")
                throw io_error("campaign CSV: unexpected header '" + line + "'");
            have_header = true;
            continue;
        }
        auto fields = split_csv(line);
        if (fields.size() != 7)
            throw io_error("campaign CSV: expected 7 columns, got " + std::to_string(fields.size()));
        CampaignRun run;
        run.medium = fields[0];
        run.f_hz = parse_double(fields[1]);
        run.duty_pct = parse_double(fields[2]);
        run.run_idx = static_cast<int>(parse_double(fields[3]));
        run.P_a_W = parse_double(fields[4]);
        run.P_p_W = parse_double(fields[5]);
        run.amp_m = parse_double(fields[6]);
        out.runs.push_back(std::move(run));
    }
    if (!have_header) throw io_error("campaign CSV: missing column header: " + path.string());
    return out;
}

nlohmann::json campaign_config_to_json(const ScenarioConfig& config,
                                       const std::vector<PwmPair>& pairs) {
    nlohmann::json media = nlohmann::json::array();
    for (const auto& m : config.media)
        media.push_back({{"medium",
                          {{"name", m.medium.name},
                           {"ambient_temp_C", m.medium.ambient_temp_C},
                           {"h_W_m2K", m.medium.h_W_m2K}}},
                         {"amplitude_volts", m.amplitude_volts},
                         {"use_chamber", m.use_chamber}});
    nlohmann::json jpairs = nlohmann::json::array();
    for (const auto& p : pairs) jpairs.push_back({{"f_hz", p.f_hz}, {"duty_pct", p.duty_pct}});
    return nlohmann::json{{"schema", kCampaignSchema},
                          {"plant", plant_to_json(config.plant)},
                          {"media", media},
                          {"pairs", jpairs},
                          {"sample_rate_hz", config.sample_rate_hz},
                          {"duration_s", config.duration_s},
                          {"skip_s", config.skip_s},
                          {"repeats", config.repeats},
                          {"noise_seed", config.noise_seed},
                          {"noise_level", config.noise_level}};
}

void campaign_config_from_json(const nlohmann::json& j, ScenarioConfig& config,
                               std::vector<PwmPair>& pairs) {
    if (j.value("schema", std::string(kCampaignSchema)) != kCampaignSchema)
        throw config_error("campaign document: unsupported schema");
    try {
        config.plant = plant_from_json(j.at("plant"));
        config.media.clear();
        for (const auto& jm : j.at("media")) {
            CampaignMedium m;
            m.medium.name = jm.at("medium").at("name").get<std::string>();
            m.medium.ambient_temp_C = jm.at("medium").at("ambient_temp_C").get<double>();
            m.medium.h_W_m2K = jm.at("medium").at("h_W_m2K").get<double>();
            m.amplitude_volts = jm.at("amplitude_volts").get<double>();
            m.use_chamber = jm.value("use_chamber", false);
            config.media.push_back(std::move(m));
        }
        pairs.clear();
        if (j.contains("pairs"))
            for (const auto& jp : j.at("pairs"))
                pairs.push_back({jp.at("f_hz").get<double>(), jp.at("duty_pct").get<double>()});
        if (pairs.empty()) pairs = protocol_pairs();
        config.sample_rate_hz = j.value("sample_rate_hz", 1000.0);
        config.duration_s = j.value("duration_s", 32.0);
        config.skip_s = j.value("skip_s", 2.0);
        config.repeats = j.value("repeats", 5);
        config.noise_seed = j.value("noise_seed", std::uint64_t{1});
        config.noise_level = j.value("noise_level", 0.02);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("campaign document: ") + e.what());
    }
    config.validate();
}

}
