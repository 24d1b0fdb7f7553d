#include "smasim/actuator.hpp"

#include <nlohmann/json.hpp>

#include "smasim/errors.hpp"
#include "smasim/text_io.hpp"

namespace smasim {

void ActuatorModel::validate() const {
    wire.validate();
    medium.validate();
    if (chamber) chamber->validate();
    kinetics.validate();
    transmission.validate();
}

namespace {

using nlohmann::json;

json wire_to_json(const WireSpec& w) {
    return json{{"diameter_m", w.diameter_m},
                {"length_m", w.length_m},
                {"density_kg_m3", w.density_kg_m3},
                {"specific_heat_J_kgK", w.specific_heat_J_kgK},
                {"resistance_ohm", w.resistance_ohm}};
}

WireSpec wire_from_json(const json& j) {
    WireSpec w;
    w.diameter_m = j.at("diameter_m").get<double>();
    w.length_m = j.at("length_m").get<double>();
    w.density_kg_m3 = j.at("density_kg_m3").get<double>();
    w.specific_heat_J_kgK = j.at("specific_heat_J_kgK").get<double>();
    w.resistance_ohm = j.at("resistance_ohm").get<double>();
    return w;
}

json medium_to_json(const MediumSpec& m) {
    return json{{"name", m.name}, {"ambient_temp_C", m.ambient_temp_C}, {"h_W_m2K", m.h_W_m2K}};
}

MediumSpec medium_from_json(const json& j) {
    MediumSpec m;
    m.name = j.at("name").get<std::string>();
    m.ambient_temp_C = j.at("ambient_temp_C").get<double>();
    m.h_W_m2K = j.at("h_W_m2K").get<double>();
    return m;
}

json chamber_to_json(const ChamberSpec& c) {
    return json{{"gap_conductance_W_K", c.gap_conductance_W_K},
                {"wall_conductance_W_K", c.wall_conductance_W_K},
                {"chamber_heat_capacity_J_K", c.chamber_heat_capacity_J_K}};
}

ChamberSpec chamber_from_json(const json& j) {
    ChamberSpec c;
    c.gap_conductance_W_K = j.at("gap_conductance_W_K").get<double>();
    c.wall_conductance_W_K = j.at("wall_conductance_W_K").get<double>();
    c.chamber_heat_capacity_J_K = j.at("chamber_heat_capacity_J_K").get<double>();
    return c;
}

json kinetics_to_json(const KineticsSpec& k) {
    return json{{"M_f_C", k.M_f_C},
                {"M_s_C", k.M_s_C},
                {"A_s_C", k.A_s_C},
                {"A_f_C", k.A_f_C},
                {"max_strain", k.max_strain}};
}

KineticsSpec kinetics_from_json(const json& j) {
    KineticsSpec k;
    k.M_f_C = j.at("M_f_C").get<double>();
    k.M_s_C = j.at("M_s_C").get<double>();
    k.A_s_C = j.at("A_s_C").get<double>();
    k.A_f_C = j.at("A_f_C").get<double>();
    k.max_strain = j.at("max_strain").get<double>();
    return k;
}

json transmission_to_json(const TransmissionSpec& t) {
    return json{{"gain", t.gain},
                {"wire_length_m", t.wire_length_m},
                {"bias_offset_m", t.bias_offset_m}};
}

TransmissionSpec transmission_from_json(const json& j) {
    TransmissionSpec t;
    t.gain = j.at("gain").get<double>();
    t.wire_length_m = j.at("wire_length_m").get<double>();
    t.bias_offset_m = j.at("bias_offset_m").get<double>();
    return t;
}

}  // namespace

nlohmann::json plant_to_json(const ActuatorModel& model) {
    json j{{"schema", kPlantSchema},
           {"wire", wire_to_json(model.wire)},
           {"medium", medium_to_json(model.medium)},
           {"kinetics", kinetics_to_json(model.kinetics)},
           {"transmission", transmission_to_json(model.transmission)}};
    if (model.chamber) j["chamber"] = chamber_to_json(*model.chamber);
    return j;
}

ActuatorModel plant_from_json(const nlohmann::json& j) {
    if (j.value("schema", std::string(kPlantSchema)) != kPlantSchema)
        throw config_error("plant document: unsupported schema");
    ActuatorModel m;
    try {
        m.wire = wire_from_json(j.at("wire"));
        m.medium = medium_from_json(j.at("medium"));
        m.kinetics = kinetics_from_json(j.at("kinetics"));
        m.transmission = transmission_from_json(j.at("transmission"));
        if (j.contains("chamber") && !j.at("chamber").is_null())
            m.chamber = chamber_from_json(j.at("chamber"));
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("plant document: ") + e.what());
    }
    m.validate();
    return m;
}

std::string plant_hash(const ActuatorModel& model) {
    return fnv1a_hex(plant_to_json(model).dump());
}

}
