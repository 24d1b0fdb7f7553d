#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "smasim/kinetics.hpp"
#include "smasim/thermal.hpp"

namespace smasim {

/// The full simulatable plant: wire, surrounding medium, optional insulating
/// chamber, phase kinetics and output transmission.
struct ActuatorModel {
    WireSpec wire;
    MediumSpec medium;
    std::optional<ChamberSpec> chamber;
    KineticsSpec kinetics;
    TransmissionSpec transmission;

    void validate() const;
};

inline constexpr const char* kPlantSchema = "smasim/plant-v1";

nlohmann::json plant_to_json(const ActuatorModel& model);
ActuatorModel plant_from_json(const nlohmann::json& j);

/// Stable hash of the canonical plant document; stamped into every report so
/// `compare` can refuse mixing results from different plants.
std::string plant_hash(const ActuatorModel& model);

}
