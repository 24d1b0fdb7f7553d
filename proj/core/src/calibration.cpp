#include "smasim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "smasim/errors.hpp"
#include "smasim/power_metrics.hpp"
#include "smasim/simulate.hpp"

namespace smasim {

std::string to_string(TargetQuantity q) {
    switch (q) {
        case TargetQuantity::average_power: return "P_a";
        case TargetQuantity::peak_power: return "P_p";
        case TargetQuantity::amplitude: return "amplitude";
    }
    return "?";
}

TargetQuantity target_quantity_from_string(const std::string& s) {
    if (s == "P_a") return TargetQuantity::average_power;
    if (s == "P_p") return TargetQuantity::peak_power;
    if (s == "amplitude") return TargetQuantity::amplitude;
    throw config_error("unknown target quantity '" + s + "'");
}

void CalibrationProblem::validate() const {
    template_model.validate();
    if (scenarios.empty()) throw parameter_error("CalibrationProblem: no scenarios");
    if (targets.empty()) throw parameter_error("CalibrationProblem: at least one target required");
    for (const auto& t : targets) {
        if (t.scenario_index >= scenarios.size())
            throw parameter_error("CalibrationProblem: target references missing scenario");
        if (!(t.weight > 0.0)) throw parameter_error("CalibrationProblem: weights must be > 0");
        if (t.value == 0.0) throw parameter_error("CalibrationProblem: target value must be nonzero");
    }
    for (const auto& p : free_parameters)
        if (!(p.lower < p.upper))
            throw parameter_error("CalibrationProblem: bound lo < hi violated for " + p.name);
    if (max_evals < 1) throw parameter_error("CalibrationProblem: max_evals must be >= 1");
}

namespace {

double* wire_field(WireSpec& w, const std::string& f) {
    if (f == "diameter_m") return &w.diameter_m;
    if (f == "length_m") return &w.length_m;
    if (f == "density_kg_m3") return &w.density_kg_m3;
    if (f == "specific_heat_J_kgK") return &w.specific_heat_J_kgK;
    if (f == "resistance_ohm") return &w.resistance_ohm;
    return nullptr;
}

double* medium_field(MediumSpec& m, const std::string& f) {
    if (f == "ambient_temp_C") return &m.ambient_temp_C;
    if (f == "h_W_m2K") return &m.h_W_m2K;
    return nullptr;
}

double* chamber_field(ChamberSpec& c, const std::string& f) {
    if (f == "gap_conductance_W_K") return &c.gap_conductance_W_K;
    if (f == "wall_conductance_W_K") return &c.wall_conductance_W_K;
    if (f == "chamber_heat_capacity_J_K") return &c.chamber_heat_capacity_J_K;
    return nullptr;
}

double* kinetics_field(KineticsSpec& k, const std::string& f) {
    if (f == "M_f_C") return &k.M_f_C;
    if (f == "M_s_C") return &k.M_s_C;
    if (f == "A_s_C") return &k.A_s_C;
    if (f == "A_f_C") return &k.A_f_C;
    if (f == "max_strain") return &k.max_strain;
    return nullptr;
}

double* transmission_field(TransmissionSpec& t, const std::string& f) {
    if (f == "gain") return &t.gain;
    if (f == "wire_length_m") return &t.wire_length_m;
    if (f == "bias_offset_m") return &t.bias_offset_m;
    return nullptr;
}

double* drive_field(PwmSpec& d, const std::string& f) {
    if (f == "amplitude_volts") return &d.amplitude_volts;
    if (f == "duty_fraction") return &d.duty_fraction;
    if (f == "frequency_hz") return &d.frequency_hz;
    return nullptr;
}

std::vector<double*> resolve_parameter(ActuatorModel& model,
                                       std::vector<CalibrationScenario>& scenarios,
                                       const std::string& name) {
    std::vector<double*> slots;
    const auto dot = name.find('.');
    if (dot == std::string::npos || dot + 1 >= name.size())
        throw parameter_error("free parameter '" + name + "': expected <group>.<field>");
    const std::string group = name.substr(0, dot);
    const std::string field = name.substr(dot + 1);

    if (group == "wire") {
        if (auto* p = wire_field(model.wire, field)) slots.push_back(p);
    } else if (group == "kinetics") {
        if (auto* p = kinetics_field(model.kinetics, field)) slots.push_back(p);
    } else if (group == "transmission") {
        if (auto* p = transmission_field(model.transmission, field)) slots.push_back(p);
    } else if (group == "chamber") {
        if (!model.chamber)
            throw parameter_error("free parameter '" + name + "': template has no chamber");
        if (auto* p = chamber_field(*model.chamber, field)) slots.push_back(p);
    } else if (group == "medium") {
        if (auto* p = medium_field(model.medium, field)) slots.push_back(p);
        for (auto& s : scenarios)
            if (s.medium)
                if (auto* p = medium_field(*s.medium, field)) slots.push_back(p);
    } else if (group.rfind("medium[", 0) == 0 && group.back() == ']') {
        const std::string label = group.substr(7, group.size() - 8);
        if (model.medium.name == label)
            if (auto* p = medium_field(model.medium, field)) slots.push_back(p);
        for (auto& s : scenarios)
            if (s.medium && s.medium->name == label)
                if (auto* p = medium_field(*s.medium, field)) slots.push_back(p);
        if (slots.empty())
            throw parameter_error("free parameter '" + name + "': no medium labelled '" + label + "'");
    } else if (group == "drive") {
        for (auto& s : scenarios)
            if (auto* p = drive_field(s.drive, field)) slots.push_back(p);
    } else {
        throw parameter_error("free parameter '" + name + "': unknown group '" + group + "'");
    }

    if (slots.empty())
        throw parameter_error("free parameter '" + name + "': unknown field '" + field + "'");
    return slots;
}

struct ScenarioMetrics {
    double P_a = 0.0;
    double P_p = 0.0;
    double amplitude = 0.0;
};

ScenarioMetrics evaluate_scenario(const ActuatorModel& model, const CalibrationScenario& scenario,
                                  std::size_t index) {
    try {
        ActuatorModel m = model;
        if (scenario.medium) m.medium = *scenario.medium;
        const Waveform drive = generate_pwm(scenario.drive);
        const SimTrace trace = simulate_actuator(m, drive);
        const PowerMetrics pm = power_metrics(trace.power_waveform(), scenario.skip_s);
        const Waveform disp = steady_state_window(trace.displacement_waveform(), scenario.skip_s);
        return {pm.P_a_W, pm.P_p_W, peak_to_peak(disp.samples)};
    } catch (const error& e) {
        throw error("scenario " + std::to_string(index) + ": " + e.what());
    }
}

}  // namespace

void apply_parameter(ActuatorModel& model, std::vector<CalibrationScenario>& scenarios,
                     const std::string& name, double value) {
    for (double* slot : resolve_parameter(model, scenarios, name)) *slot = value;
}

double objective(const CalibrationProblem& problem, std::span<const double> params) {
    if (params.size() != problem.free_parameters.size())
        throw parameter_error("objective: parameter count mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& fp = problem.free_parameters[i];
        if (!(params[i] >= fp.lower && params[i] <= fp.upper))
            throw parameter_error("objective: parameter '" + fp.name + "' outside bounds");
    }

    ActuatorModel model = problem.template_model;
    std::vector<CalibrationScenario> scenarios = problem.scenarios;
    for (std::size_t i = 0; i < params.size(); ++i)
        apply_parameter(model, scenarios, problem.free_parameters[i].name, params[i]);

    std::vector<ScenarioMetrics> metrics(scenarios.size());
    std::vector<bool> needed(scenarios.size(), false);
    for (const auto& t : problem.targets) needed[t.scenario_index] = true;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
        if (needed[s]) metrics[s] = evaluate_scenario(model, scenarios[s], s);

    double weighted = 0.0, total_weight = 0.0;
    for (const auto& t : problem.targets) {
        const auto& m = metrics[t.scenario_index];
        double sim = 0.0;
        switch (t.quantity) {
            case TargetQuantity::average_power: sim = m.P_a; break;
            case TargetQuantity::peak_power: sim = m.P_p; break;
            case TargetQuantity::amplitude: sim = m.amplitude; break;
        }
        const double rel = (sim - t.value) / t.value;
        weighted += t.weight * rel * rel;
        total_weight += t.weight;
    }
    return std::sqrt(weighted / total_weight);
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

CalibrationResult calibrate(const CalibrationProblem& problem) {
    problem.validate();
    const std::size_t dim = problem.free_parameters.size();
    if (dim == 0) throw parameter_error("calibrate: no free parameters");

    const auto to_params = [&](const std::vector<double>& z) {
        std::vector<double> p(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto& fp = problem.free_parameters[i];
            p[i] = fp.lower + (fp.upper - fp.lower) * logistic(z[i]);
        }
        return p;
    };

    CalibrationResult result;
    int evals = 0;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_z;
    const auto eval = [&](const std::vector<double>& z) {
        const double f = objective(problem, to_params(z));
        ++evals;
        if (f < best_f) {
            best_f = f;
            best_z = z;
            result.log.push_back({evals, f});
        }
        return f;
    };

    // Initial vertex from the template's current values, mapped into the
    // open box; remaining vertices offset per coordinate with seeded jitter.
    ActuatorModel probe_model = problem.template_model;
    std::vector<CalibrationScenario> probe_scenarios = problem.scenarios;
    std::vector<double> z0(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& fp = problem.free_parameters[i];
        double v = *resolve_parameter(probe_model, probe_scenarios, fp.name).front();
        double rel = (v - fp.lower) / (fp.upper - fp.lower);
        rel = std::clamp(rel, 1e-5, 1.0 - 1e-5);
        z0[i] = logit(rel);
    }

    std::mt19937_64 rng(problem.seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<std::vector<double>> simplex(dim + 1, z0);
    for (std::size_t v = 1; v <= dim; ++v) {
        simplex[v][v - 1] += 0.7;
        for (auto& c : simplex[v]) c += jitter(rng);
    }

    std::vector<double> f(dim + 1);
    for (std::size_t v = 0; v <= dim && evals < problem.max_evals; ++v) f[v] = eval(simplex[v]);
    const double initial_f = f[0];

    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    constexpr double kDiamTol = 1e-6;

    bool diameter_converged = false;
    while (evals < problem.max_evals) {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });

        double diameter = 0.0;
        for (std::size_t v = 0; v <= dim; ++v)
            for (std::size_t i = 0; i < dim; ++i)
                diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[idx[0]][i]));
        double scale = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            scale = std::max(scale, std::abs(simplex[idx[0]][i]));
        if (diameter < kDiamTol * (1.0 + scale)) {
            diameter_converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[idx[v]][i] / static_cast<double>(dim);
        const std::size_t worst = idx[dim];

        const auto blend = [&](double coeff) {
            std::vector<double> z(dim);
            for (std::size_t i = 0; i < dim; ++i)
                z[i] = centroid[i] + coeff * (centroid[i] - simplex[worst][i]);
            return z;
        };

        auto reflected = blend(kReflect);
        const double fr = eval(reflected);
        if (fr < f[idx[0]]) {
            if (evals >= problem.max_evals) { simplex[worst] = reflected; f[worst] = fr; break; }
            auto expanded = blend(kExpand);
            const double fe = eval(expanded);
            if (fe < fr) { simplex[worst] = expanded; f[worst] = fe; }
            else { simplex[worst] = reflected; f[worst] = fr; }
        } else if (fr < f[idx[dim - 1]]) {
            simplex[worst] = reflected;
            f[worst] = fr;
        } else {
            if (evals >= problem.max_evals) break;
            auto contracted = blend(-kContract);
            const double fc = eval(contracted);
            if (fc < f[worst]) {
                simplex[worst] = contracted;
                f[worst] = fc;
            } else {
                for (std::size_t v = 0; v <= dim; ++v) {
                    if (v == idx[0]) continue;
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v][i] = simplex[idx[0]][i] + kShrink * (simplex[v][i] - simplex[idx[0]][i]);
                    if (evals >= problem.max_evals) break;
                    f[v] = eval(simplex[v]);
                }
            }
        }
    }

    result.params = to_params(best_z);
    result.residual = best_f;
    result.evals = evals;
    result.converged = diameter_converged || best_f < initial_f;
    return result;
}

nlohmann::json calibration_problem_to_json(const CalibrationProblem& p) {
    nlohmann::json scenarios = nlohmann::json::array();
    for (const auto& s : p.scenarios) {
        nlohmann::json js{{"drive",
                           {{"frequency_hz", s.drive.frequency_hz},
                            {"duty_fraction", s.drive.duty_fraction},
                            {"amplitude_volts", s.drive.amplitude_volts},
                            {"sample_rate_hz", s.drive.sample_rate_hz},
                            {"duration_s", s.drive.duration_s}}},
                          {"skip_s", s.skip_s}};
        if (s.medium)
            js["medium"] = {{"name", s.medium->name},
                            {"ambient_temp_C", s.medium->ambient_temp_C},
                            {"h_W_m2K", s.medium->h_W_m2K}};
        scenarios.push_back(js);
    }
    nlohmann::json free = nlohmann::json::array();
    for (const auto& fp : p.free_parameters)
        free.push_back({{"name", fp.name}, {"lower", fp.lower}, {"upper", fp.upper}});
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : p.targets)
        targets.push_back({{"scenario", t.scenario_index},
                           {"quantity", to_string(t.quantity)},
                           {"value", t.value},
                           {"weight", t.weight}});
    return nlohmann::json{{"schema", kCalibrationSchema},
                          {"template", plant_to_json(p.template_model)},
                          {"scenarios", scenarios},
                          {"free", free},
                          {"targets", targets},
                          {"max_evals", p.max_evals},
                          {"seed", p.seed}};
}

CalibrationProblem calibration_problem_from_json(const nlohmann::json& j) {
    if (j.value("schema", std::string(kCalibrationSchema)) != kCalibrationSchema)
        throw config_error("calibration document: unsupported schema");
    CalibrationProblem p;
    try {
        p.template_model = plant_from_json(j.at("template"));
        for (const auto& js : j.at("scenarios")) {
            CalibrationScenario s;
            const auto& d = js.at("drive");
            s.drive.frequency_hz = d.at("frequency_hz").get<double>();
            s.drive.duty_fraction = d.at("duty_fraction").get<double>();
            s.drive.amplitude_volts = d.at("amplitude_volts").get<double>();
            s.drive.sample_rate_hz = d.value("sample_rate_hz", 1000.0);
            s.drive.duration_s = d.value("duration_s", 32.0);
            s.skip_s = js.value("skip_s", 2.0);
            if (js.contains("medium") && !js.at("medium").is_null()) {
                MediumSpec m;
                m.name = js.at("medium").at("name").get<std::string>();
                m.ambient_temp_C = js.at("medium").at("ambient_temp_C").get<double>();
                m.h_W_m2K = js.at("medium").at("h_W_m2K").get<double>();
                s.medium = m;
            }
            p.scenarios.push_back(std::move(s));
        }
        for (const auto& jf : j.at("free"))
            p.free_parameters.push_back({jf.at("name").get<std::string>(),
                                         jf.at("lower").get<double>(),
                                         jf.at("upper").get<double>()});
        for (const auto& jt : j.at("targets"))
            p.targets.push_back({jt.at("scenario").get<std::size_t>(),
                                 target_quantity_from_string(jt.at("quantity").get<std::string>()),
                                 jt.at("value").get<double>(),
                                 jt.value("weight", 1.0)});
        p.max_evals = j.value("max_evals", 400);
        p.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("calibration document: ") + e.what());
    }
    p.validate();
    return p;
}

nlohmann::json calibration_result_to_json(const CalibrationProblem& p, const CalibrationResult& r) {
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t i = 0; i < p.free_parameters.size(); ++i)
        params[p.free_parameters[i].name] = r.params[i];
    return nlohmann::json{{"schema", "smasim/calibration-result-v1"},
                          {"params", params},
                          {"residual", r.residual},
                          {"evals", r.evals},
                          {"converged", r.converged}};
}

}
