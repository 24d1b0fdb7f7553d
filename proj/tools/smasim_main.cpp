// smasim: SMA microactuator simulation and characterization toolbox.
//
// Subcommands: simulate, campaign, identify, calibrate, compare.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smasim/calibration.hpp"
#include "smasim/campaign.hpp"
#include "smasim/errors.hpp"
#include "smasim/power_metrics.hpp"
#include "smasim/signal_gen.hpp"
#include "smasim/simulate.hpp"
#include "smasim/sysid.hpp"
#include "smasim/text_io.hpp"
#include "smasim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const fs::path& path) {
    try {
        return json::parse(smasim::read_text_file(path));
    } catch (const json::exception& e) {
        throw smasim::config_error(path.string() + ": " + e.what());
    }
}

smasim::ActuatorModel load_plant(const json& node, const fs::path& base_dir) {
    if (node.is_string())
        return smasim::plant_from_json(load_json(base_dir / node.get<std::string>()));
    return smasim::plant_from_json(node);
}

void print_trace_warnings(const smasim::SimTrace& trace, double warn_temp_C) {
    if (trace.samples_above_warn > 0)
        std::cerr << "warning: wire temperature exceeded " << smasim::g10(warn_temp_C)
                  << " C in " << trace.samples_above_warn
                  << " samples (max " << smasim::g10(trace.max_wire_temp_C) << " C)\n";
    if (trace.samples_extrapolated > 0)
        std::cerr << "warning: wire above 100 C in water for " << trace.samples_extrapolated
                  << " samples; lumped model extrapolates (no boiling)\n";
}

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<double> warn_temp) {
    const json cfg = load_json(config_path);
    if (cfg.value("schema", std::string("smasim/scenario-v1")) != "smasim/scenario-v1")
        throw smasim::config_error("scenario document: unsupported schema");

    const smasim::ActuatorModel model = load_plant(cfg.at("plant"), config_path.parent_path());
    smasim::PwmSpec drive;
    const json& d = cfg.at("drive");
    drive.frequency_hz = d.at("frequency_hz").get<double>();
    drive.duty_fraction = d.at("duty_fraction").get<double>();
    drive.amplitude_volts = d.at("amplitude_volts").get<double>();
    drive.sample_rate_hz = d.value("sample_rate_hz", 1000.0);
    drive.duration_s = d.value("duration_s", 32.0);
    const double skip_s = cfg.value("skip_s", 2.0);
    const double warn_c = warn_temp.value_or(cfg.value("warn_temp_C", smasim::kDefaultWarnTempC));

    const smasim::SimTrace trace =
        smasim::simulate_actuator(model, smasim::generate_pwm(drive), warn_c);

    fs::create_directories(out_dir);
    const std::string hash = smasim::fnv1a_hex(cfg.dump());
    smasim::write_trace_csv(trace, out_dir / "trace.csv", hash);

    const smasim::PowerMetrics pm = smasim::power_metrics(trace.power_waveform(), skip_s);
    const smasim::Waveform disp =
        smasim::steady_state_window(trace.displacement_waveform(), skip_s);
    std::cout << "trace: " << (out_dir / "trace.csv").string() << "\n";
    std::cout << "P_a = " << smasim::g10(pm.P_a_W) << " W, P_p = " << smasim::g10(pm.P_p_W)
              << " W, displacement pk-pk = " << smasim::g10(smasim::peak_to_peak(disp.samples) * 1e3)
              << " mm\n";
    print_trace_warnings(trace, warn_c);
    return 0;
}

int cmd_campaign(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed) {
    const json cfg = load_json(config_path);
    smasim::ScenarioConfig config;
    std::vector<smasim::PwmPair> pairs;
    smasim::campaign_config_from_json(cfg, config, pairs);
    if (seed) config.noise_seed = *seed;

    const smasim::CampaignResult result = smasim::run_campaign(config, pairs);
    smasim::write_report(result, config, out_dir);
    std::cout << "campaign: " << result.runs.size() << " runs, " << result.rows.size()
              << " summary rows -> " << out_dir.string() << "\n";
    for (const auto& row : result.rows)
        std::cout << "  " << row.medium << " f=" << smasim::g10(row.f_hz)
                  << " Hz DC=" << smasim::g10(row.duty_pct)
                  << " %: P_a = " << smasim::g10(row.P_a.mean) << " +/- "
                  << smasim::g10(row.P_a.esd) << " W, P_p = " << smasim::g10(row.P_p.mean)
                  << " +/- " << smasim::g10(row.P_p.esd) << " W\n";
    return 0;
}

struct Dataset {
    smasim::Waveform input;
    smasim::Waveform output;
};

Dataset read_dataset_csv(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw smasim::io_error("cannot open for reading: " + path.string());
    Dataset d;
    double fs_hz = 0.0;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# sample_rate_hz:", 0) == 0) {
            fs_hz = smasim::parse_double(std::string_view(line).substr(17));
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            if (line != "time_s,input,output")
                throw smasim::io_error("dataset CSV: expected header time_s,input,output");
            have_header = true;
            continue;
        }
        const auto fields = smasim::split_csv(line);
        if (fields.size() != 3)
            throw smasim::io_error("dataset CSV: expected 3 columns");
        d.input.samples.push_back(smasim::parse_double(fields[1]));
        d.output.samples.push_back(smasim::parse_double(fields[2]));
    }
    if (!(fs_hz > 0.0))
        throw smasim::io_error("dataset CSV: missing '# sample_rate_hz:' header");
    d.input.sample_rate_hz = d.output.sample_rate_hz = fs_hz;
    d.input.unit = d.output.unit = smasim::Unit::meters;
    return d;
}

int cmd_identify(const fs::path& data_path, const std::string& kind, std::size_t order,
                 double floor_fraction, const fs::path& out_dir) {
    const Dataset raw = read_dataset_csv(data_path);
    smasim::SysIdDataset data;
    data.input = raw.input;
    data.output = raw.output;
    data.validate();

    const smasim::LtiModel model = kind == "fir" ? smasim::fit_fir_ls(data, order)
                                                 : smasim::fit_iir_ls(data, order);
    const double bandwidth = smasim::excitation_bandwidth(data.input, floor_fraction);
    const double gain = smasim::static_gain(model);

    // Bode grid across the excited band (and a little beyond, for context).
    const double nyquist = data.sample_rate_hz() / 2.0;
    const double f_hi = std::min(nyquist * 0.99, 2.0 * bandwidth);
    std::vector<double> freqs;
    for (int i = 0; i <= 120; ++i)
        freqs.push_back(std::max(1e-3, f_hi * static_cast<double>(i) / 120.0));
    smasim::FrequencyResponse fr = smasim::frequency_response(model, freqs);
    fr.valid_upto_hz = bandwidth;

    fs::create_directories(out_dir);
    const std::string hash = smasim::fnv1a_hex(smasim::read_text_file(data_path));

    json jm = model.to_json();
    jm["config_hash"] = hash;
    jm["valid_upto_hz"] = bandwidth;
    smasim::write_text_file(out_dir / "model.json", jm.dump(2) + "\n");

    std::ofstream os(out_dir / "bode.csv", std::ios::binary);
    if (!os) throw smasim::io_error("cannot open for writing: " + (out_dir / "bode.csv").string());
    os << "# smasim bode v1\n# tool_version: " << smasim::kToolVersion << "\n";
    os << "# config_hash: " << hash << "\n";
    os << "# valid_upto_hz: " << smasim::g17(bandwidth) << "\n";
    os << "f_hz,mag_db,phase_deg\n";
    for (std::size_t i = 0; i < fr.freqs_hz.size(); ++i)
        os << smasim::g17(fr.freqs_hz[i]) << ',' << smasim::g17(fr.magnitude_db[i]) << ','
           << smasim::g17(fr.phase_deg[i]) << "\n";
    os.close();

    std::cout << "model: " << (out_dir / "model.json").string() << "\n";
    std::cout << "bode:  " << (out_dir / "bode.csv").string() << "\n";
    std::cout << "static gain = " << smasim::g10(gain) << ", valid up to "
              << smasim::g10(bandwidth) << " Hz\n";
    return 0;
}

int cmd_calibrate(const fs::path& config_path, const fs::path& out_dir,
                  std::optional<std::uint64_t> seed) {
    const json cfg = load_json(config_path);
    smasim::CalibrationProblem problem = smasim::calibration_problem_from_json(cfg);
    if (seed) problem.seed = *seed;

    const smasim::CalibrationResult result = smasim::calibrate(problem);

    fs::create_directories(out_dir);
    json jr = smasim::calibration_result_to_json(problem, result);
    jr["config_hash"] = smasim::fnv1a_hex(cfg.dump());
    jr["seed"] = problem.seed;
    if (problem.template_model.chamber)
        jr["notes"] = json::array({"chamber scenario drive defaults to the in-water protocol "
                                   "(12 V, DC 7 %) unless freed or overridden in the problem"});
    smasim::write_text_file(out_dir / "calibration.json", jr.dump(2) + "\n");

    std::ofstream os(out_dir / "convergence.csv", std::ios::binary);
    if (!os)
        throw smasim::io_error("cannot open for writing: " +
                               (out_dir / "convergence.csv").string());
    os << "# smasim convergence v1\n# config_hash: " << jr["config_hash"].get<std::string>()
       << "\n";
    os << "eval,best_residual\n";
    for (const auto& rec : result.log)
        os << rec.eval << ',' << smasim::g17(rec.best_residual) << "\n";
    os.close();

    std::cout << "calibration: " << (out_dir / "calibration.json").string() << "\n";
    for (std::size_t i = 0; i < problem.free_parameters.size(); ++i)
        std::cout << "  " << problem.free_parameters[i].name << " = "
                  << smasim::g10(result.params[i]) << "\n";
    std::cout << "residual = " << smasim::g10(result.residual) << " after " << result.evals
              << " evals, converged = " << (result.converged ? "true" : "false") << "\n";
    return result.converged ? 0 : 1;
}

int cmd_compare(const fs::path& base_path, const fs::path& new_path, bool force) {
    const smasim::CampaignCsv base = smasim::read_campaign_csv(base_path);
    const smasim::CampaignCsv next = smasim::read_campaign_csv(new_path);
    if (!force && base.plant_hash != next.plant_hash)
        throw smasim::config_error("compare: plant hashes differ (" + base.plant_hash + " vs " +
                                   next.plant_hash + "); rerun with --force to override");

    // Per-pair means across runs (media within one file are pooled per pair).
    struct Pair {
        double f, dc;
        bool operator<(const Pair& o) const { return f != o.f ? f < o.f : dc < o.dc; }
    };
    const auto collect = [](const smasim::CampaignCsv& c) {
        std::map<Pair, std::pair<std::vector<double>, std::vector<double>>> by_pair;
        for (const auto& run : c.runs) {
            auto& entry = by_pair[{run.f_hz, run.duty_pct}];
            entry.first.push_back(run.P_a_W);
            entry.second.push_back(run.P_p_W);
        }
        return by_pair;
    };
    const auto base_pairs = collect(base);
    const auto next_pairs = collect(next);

    std::cout << "quantity,f_hz,duty_pct,base_W,new_W,increase_pct\n";
    bool any = false;
    for (const auto& [pair, values] : base_pairs) {
        const auto it = next_pairs.find(pair);
        if (it == next_pairs.end()) continue;
        any = true;
        const double base_pa = smasim::mean_esd(values.first).mean;
        const double new_pa = smasim::mean_esd(it->second.first).mean;
        const double base_pp = smasim::mean_esd(values.second).mean;
        const double new_pp = smasim::mean_esd(it->second.second).mean;
        const double inc_pa = smasim::percent_increase(new_pa, base_pa);
        const double inc_pp = smasim::percent_increase(new_pp, base_pp);
        std::cout << "P_a," << smasim::g10(pair.f) << ',' << smasim::g10(pair.dc) << ','
                  << smasim::g17(base_pa) << ',' << smasim::g17(new_pa) << ','
                  << smasim::g10(inc_pa) << "\n";
        std::cout << "P_p," << smasim::g10(pair.f) << ',' << smasim::g10(pair.dc) << ','
                  << smasim::g17(base_pp) << ',' << smasim::g17(new_pp) << ','
                  << smasim::g10(inc_pp) << "\n";
        std::cout << "f=" << smasim::g10(pair.f) << " Hz, DC=" << smasim::g10(pair.dc)
                  << " %: average power increase " << smasim::g10(inc_pa)
                  << " %, peak power increase " << smasim::g10(inc_pp) << " %\n";
    }
    if (!any) throw smasim::config_error("compare: no common {f, DC} pairs between the files");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SMA microactuator power/displacement simulation toolbox"};
    app.set_version_flag("--version", smasim::kToolVersion);
    app.require_subcommand(1);

    std::string config, out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> warn_temp;

    auto* sim = app.add_subcommand("simulate", "Simulate one drive scenario to a trace CSV");
    sim->add_option("--config", config, "scenario JSON")->required();
    sim->add_option("--out", out, "output directory");
    sim->add_option("--warn-temp", warn_temp, "wire temperature warning threshold (C)");

    auto* camp = app.add_subcommand("campaign", "Run a frequency/duty campaign and write reports");
    camp->add_option("--config", config, "campaign JSON")->required();
    camp->add_option("--out", out, "output directory");
    camp->add_option("--seed", seed, "override the campaign noise seed");

    std::string data_path, kind = "iir";
    std::size_t order = 100;
    double floor_fraction = 0.1;
    auto* ident = app.add_subcommand("identify", "Fit an LTI sensor-path model from a dataset CSV");
    ident->add_option("--data", data_path, "dataset CSV (time_s,input,output)")->required();
    ident->add_option("--kind", kind, "iir or fir")->check(CLI::IsMember({"iir", "fir"}));
    ident->add_option("--order", order, "model order");
    ident->add_option("--floor", floor_fraction, "excitation-bandwidth floor fraction");
    ident->add_option("--out", out, "output directory");

    auto* cal = app.add_subcommand("calibrate", "Fit free plant parameters to targets");
    cal->add_option("--config", config, "calibration problem JSON")->required();
    cal->add_option("--out", out, "output directory");
    cal->add_option("--seed", seed, "override the optimizer seed");

    std::string base_csv, new_csv;
    bool force = false;
    auto* cmp = app.add_subcommand("compare", "Percent-increase table between two campaign CSVs");
    cmp->add_option("base", base_csv, "baseline campaign.csv")->required();
    cmp->add_option("new", new_csv, "comparison campaign.csv")->required();
    cmp->add_flag("--force", force, "compare across different plant hashes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config, out, warn_temp);
        if (camp->parsed()) return cmd_campaign(config, out, seed);
        if (ident->parsed()) return cmd_identify(data_path, kind, order, floor_fraction, out);
        if (cal->parsed()) return cmd_calibrate(config, out, seed);
        if (cmp->parsed()) return cmd_compare(base_csv, new_csv, force);
    } catch (const smasim::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
