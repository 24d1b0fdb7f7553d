#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smasim/actuator.hpp"
#include "smasim/signal_gen.hpp"

namespace smasim {

/// One drive/medium condition a calibration target is evaluated under. A
/// scenario medium overrides the template's; absent, the template medium is
/// used as-is.
struct CalibrationScenario {
    PwmSpec drive;
    std::optional<MediumSpec> medium;
    double skip_s = 2.0;
};

enum class TargetQuantity { average_power, peak_power, amplitude };

std::string to_string(TargetQuantity q);
TargetQuantity target_quantity_from_string(const std::string& s);

struct CalibrationTarget {
    std::size_t scenario_index = 0;
    TargetQuantity quantity = TargetQuantity::average_power;
    double value = 0.0;
    double weight = 1.0;
};

/// A named free parameter with box bounds. Names address plant or scenario
/// fields through a small path language:
///   wire.<field>, kinetics.<field>, transmission.<field>, chamber.<field>,
///   medium.<field>             template medium
///   medium[<name>].<field>     every scenario medium labelled <name>
///   drive.<field>              every scenario drive
struct FreeParameter {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
};

struct CalibrationProblem {
    ActuatorModel template_model;
    std::vector<CalibrationScenario> scenarios;
    std::vector<FreeParameter> free_parameters;
    std::vector<CalibrationTarget> targets;
    int max_evals = 400;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ConvergenceRecord {
    int eval = 0;
    double best_residual = 0.0;
};

struct CalibrationResult {
    std::vector<double> params;  // same order as problem.free_parameters
    double residual = 0.0;
    int evals = 0;
    bool converged = false;
    std::vector<ConvergenceRecord> log;
};

/// Bind one named parameter into a model / scenario set. Throws
/// parameter_error for unknown names.
void apply_parameter(ActuatorModel& model, std::vector<CalibrationScenario>& scenarios,
                     const std::string& name, double value);

/// Weighted RMS of relative target errors at the given parameter vector:
/// sqrt( sum w_i ((sim_i - target_i)/target_i)^2 / sum w_i ). One full
/// simulation per scenario; deterministic.
double objective(const CalibrationProblem& problem, std::span<const double> params);

/// Nelder-Mead over logistic-transformed parameters (every candidate stays
/// inside its bounds by construction). Deterministic for a fixed seed. Stops
/// at max_evals or when the simplex diameter falls below 1e-6 (relative);
/// exhausting the budget without improving on the initial point yields
/// converged = false rather than an exception.
CalibrationResult calibrate(const CalibrationProblem& problem);

inline constexpr const char* kCalibrationSchema = "smasim/calibration-v1";

nlohmann::json calibration_problem_to_json(const CalibrationProblem& p);
CalibrationProblem calibration_problem_from_json(const nlohmann::json& j);
nlohmann::json calibration_result_to_json(const CalibrationProblem& p, const CalibrationResult& r);

}
