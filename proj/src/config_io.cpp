#include "mcsim/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "mcsim/errors.hpp"

namespace mcsim {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (item.key() == a) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
}

const json& object_at(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_object()) throw ConfigError(std::string("config: ") + key + " must be an object");
    return v;
}

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError("config: " + where + " must be a number");
    return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return require_number(j.at(key), where + "." + key);
}

long integer_or(const json& j, const char* key, long fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError("config: " + where + key + " must be an integer");
    return v.get<long>();
}

ChannelParams parse_channel(const json& j) {
    check_keys(j, "channel", {"diffusion_coefficient", "distance", "slot_length"});
    ChannelParams ch;
    ch.diffusion_coefficient =
        number_or(j, "diffusion_coefficient", ch.diffusion_coefficient, "channel");
    ch.distance = number_or(j, "distance", ch.distance, "channel");
    ch.slot_length = number_or(j, "slot_length", ch.slot_length, "channel");
    return ch;
}

LigandParams parse_ligand(const json& j) {
    check_keys(j, "ligand", {"binding_rate", "releasing_rate", "receptor_density"});
    LigandParams lig;
    lig.binding_rate = number_or(j, "binding_rate", lig.binding_rate, "ligand");
    lig.releasing_rate = number_or(j, "releasing_rate", lig.releasing_rate, "ligand");
    lig.receptor_density = number_or(j, "receptor_density", lig.receptor_density, "ligand");
    return lig;
}

ModulationParams parse_modulation(const json& j) {
    check_keys(j, "modulation", {"molecules_per_one", "prior_one"});
    ModulationParams mod;
    mod.molecules_per_one = static_cast<int>(
        integer_or(j, "molecules_per_one", mod.molecules_per_one, "modulation."));
    mod.prior_one = number_or(j, "prior_one", mod.prior_one, "modulation");
    mod.prior_zero = 1.0 - mod.prior_one;
    return mod;
}

NoiseSpec parse_noise(const json& j) {
    check_keys(j, "noise", {"sigma", "target_sinr", "target_snr"});
    if (j.size() != 1)
        throw ConfigError(
            "config: noise must contain exactly one of sigma, target_sinr, target_snr");
    NoiseSpec spec;
    if (j.contains("sigma")) {
        spec.kind = NoiseSpec::Kind::Sigma;
        spec.value = require_number(j.at("sigma"), "noise.sigma");
    } else if (j.contains("target_sinr")) {
        spec.kind = NoiseSpec::Kind::TargetSinr;
        spec.value = require_number(j.at("target_sinr"), "noise.target_sinr");
    } else {
        spec.kind = NoiseSpec::Kind::TargetSnr;
        spec.value = require_number(j.at("target_snr"), "noise.target_snr");
    }
    return spec;
}

std::variant<FixedReceiver, AtvReceiverConfig> parse_receiver(const json& j,
                                                              const ModulationParams& mod) {
    if (!j.contains("type") || !j.at("type").is_string())
        throw ConfigError("config: receiver.type must be \"fixed\" or \"atv\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "fixed") {
        check_keys(j, "receiver", {"type", "threshold"});
        FixedReceiver receiver;
        receiver.threshold =
            number_or(j, "threshold", mod.molecules_per_one / 2.0, "receiver");
        return receiver;
    }
    if (type == "atv") {
        check_keys(j, "receiver", {"type", "tolerance", "initial_threshold", "window"});
        AtvReceiverConfig receiver;
        receiver.tolerance = number_or(j, "tolerance", receiver.tolerance, "receiver");
        if (j.contains("initial_threshold"))
            receiver.initial_threshold =
                require_number(j.at("initial_threshold"), "receiver.initial_threshold");
        receiver.window = static_cast<int>(integer_or(j, "window", 0, "receiver."));
        return receiver;
    }
    throw ConfigError("config: receiver.type must be \"fixed\" or \"atv\"");
}

std::vector<SweepAxis> parse_sweep(const json& j) {
    if (!j.is_array()) throw ConfigError("config: sweep must be an array");
    std::vector<SweepAxis> sweep;
    for (const json& entry : j) {
        if (!entry.is_object()) throw ConfigError("config: sweep entries must be objects");
        check_keys(entry, "sweep entry", {"path", "values"});
        if (!entry.contains("path") || !entry.at("path").is_string())
            throw ConfigError("config: sweep entry requires a string 'path'");
        if (!entry.contains("values") || !entry.at("values").is_array())
            throw ConfigError("config: sweep entry requires a 'values' array");
        SweepAxis axis;
        axis.path = entry.at("path").get<std::string>();
        for (const json& v : entry.at("values"))
            axis.values.push_back(require_number(v, "sweep values for " + axis.path));
        sweep.push_back(std::move(axis));
    }
    return sweep;
}

BitPattern parse_bit_pattern(const json& j) {
    if (!j.is_string()) throw ConfigError("config: bit_pattern must be a string");
    const std::string s = j.get<std::string>();
    if (s == "random") return BitPattern::Random;
    if (s == "alternating") return BitPattern::Alternating;
    throw ConfigError("config: bit_pattern must be \"random\" or \"alternating\"");
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(j, "top level",
               {"channel", "ligand", "modulation", "noise", "receiver", "num_slots",
                "num_trials", "seed", "max_offset", "bit_pattern", "sweep"});
    ExperimentConfig cfg;
    if (j.contains("channel")) cfg.channel = parse_channel(object_at(j, "channel"));
    if (j.contains("ligand")) cfg.ligand = parse_ligand(object_at(j, "ligand"));
    if (j.contains("modulation")) cfg.modulation = parse_modulation(object_at(j, "modulation"));
    if (j.contains("noise")) cfg.noise = parse_noise(object_at(j, "noise"));
    if (j.contains("receiver"))
        cfg.receiver = parse_receiver(object_at(j, "receiver"), cfg.modulation);
    else
        cfg.receiver = FixedReceiver{cfg.modulation.molecules_per_one / 2.0};
    cfg.num_slots = integer_or(j, "num_slots", cfg.num_slots, "");
    cfg.num_trials = static_cast<int>(integer_or(j, "num_trials", cfg.num_trials, ""));
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer())
            throw ConfigError("config: seed must be a non-negative integer");
        if (v.is_number_integer() && v.get<long long>() < 0)
            throw ConfigError("config: seed must be a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    cfg.max_offset = static_cast<int>(integer_or(j, "max_offset", cfg.max_offset, ""));
    if (j.contains("bit_pattern")) cfg.bit_pattern = parse_bit_pattern(j.at("bit_pattern"));
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "' is not readable");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["channel"] = {{"diffusion_coefficient", cfg.channel.diffusion_coefficient},
                    {"distance", cfg.channel.distance},
                    {"slot_length", cfg.channel.slot_length}};
    j["ligand"] = {{"binding_rate", cfg.ligand.binding_rate},
                   {"releasing_rate", cfg.ligand.releasing_rate},
                   {"receptor_density", cfg.ligand.receptor_density}};
    j["modulation"] = {{"molecules_per_one", cfg.modulation.molecules_per_one},
                       {"prior_one", cfg.modulation.prior_one}};
    switch (cfg.noise.kind) {
        case NoiseSpec::Kind::Sigma:
            j["noise"] = {{"sigma", cfg.noise.value}};
            break;
        case NoiseSpec::Kind::TargetSinr:
            j["noise"] = {{"target_sinr", cfg.noise.value}};
            break;
        case NoiseSpec::Kind::TargetSnr:
            j["noise"] = {{"target_snr", cfg.noise.value}};
            break;
    }
    if (const auto* fixed = std::get_if<FixedReceiver>(&cfg.receiver)) {
        j["receiver"] = {{"type", "fixed"}, {"threshold", fixed->threshold}};
    } else {
        const auto& atv = std::get<AtvReceiverConfig>(cfg.receiver);
        j["receiver"] = {{"type", "atv"}, {"tolerance", atv.tolerance}, {"window", atv.window}};
        if (atv.initial_threshold) j["receiver"]["initial_threshold"] = *atv.initial_threshold;
    }
    j["num_slots"] = cfg.num_slots;
    j["num_trials"] = cfg.num_trials;
    j["seed"] = cfg.seed;
    j["max_offset"] = cfg.max_offset;
    j["bit_pattern"] = cfg.bit_pattern == BitPattern::Random ? "random" : "alternating";
    json sweep = json::array();
    for (const SweepAxis& axis : cfg.sweep)
        sweep.push_back({{"path", axis.path}, {"values", axis.values}});
    j["sweep"] = std::move(sweep);
    return j;
}

} // namespace mcsim
