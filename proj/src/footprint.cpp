#include "atlas/footprint.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "atlas/errors.hpp"

using nlohmann::json;

namespace atlas {

WaterFactorTable WaterFactorTable::defaults() {
    WaterFactorTable table;
    table.liters_per_mwh = {
        {GenerationSource::biomass, 1817.0},   {GenerationSource::hydropower, 51480.0},
        {GenerationSource::nuclear, 2200.0},   {GenerationSource::oil, 1746.0},
        {GenerationSource::coal, 1817.0},      {GenerationSource::geothermal, 1363.0},
        {GenerationSource::natural_gas, 700.0}, {GenerationSource::solar, 45.0},
        {GenerationSource::wind, 1.85},
    };
    return table;
}

std::string to_string(StorageKind kind) { return kind == StorageKind::hdd ? "hdd" : "ssd"; }

StorageKind storage_kind_from_string(const std::string& name) {
    if (name == "hdd") return StorageKind::hdd;
    if (name == "ssd") return StorageKind::ssd;
    throw ConfigError("unknown storage kind '" + name + "' (expected hdd or ssd)");
}

const StorageSpec* HardwareProfile::primary_ssd() const {
    for (const auto& device : storage) {
        if (device.kind == StorageKind::ssd) return &device;
    }
    return nullptr;
}

double operational_carbon(double energy_kwh, double intensity_g_per_kwh) {
    if (energy_kwh < 0 || intensity_g_per_kwh < 0) {
        throw InvalidQuantity("operational_carbon arguments must be non-negative");
    }
    return energy_kwh * intensity_g_per_kwh;
}

OperationalWater operational_water(double energy_mwh, const GenerationMix& mix,
                                   const WaterFactorTable& factors) {
    if (energy_mwh < 0) throw InvalidQuantity("energy must be non-negative");
    OperationalWater result;
    for (auto source : kAllGenerationSources) {
        double fraction = mix_fraction(mix, source);
        if (fraction == 0.0) continue;
        auto it = factors.liters_per_mwh.find(source);
        if (it == factors.liters_per_mwh.end()) {
            throw UnknownSource("no water factor for generation source '" + to_string(source) + "'");
        }
        double liters = energy_mwh * fraction * it->second;
        result.per_source_l[static_cast<std::size_t>(source)] = liters;
        result.total_l += liters;
    }
    return result;
}

double fab_carbon_intensity(const std::vector<std::pair<double, double>>& intensity_share) {
    double share_sum = 0.0;
    double weighted = 0.0;
    for (const auto& [intensity, share] : intensity_share) {
        share_sum += share;
        weighted += intensity * share;
    }
    if (std::abs(share_sum - 1.0) > kMixSumTolerance + kMixSumSlack) {
        throw MixSumError("fab mix shares sum to " + std::to_string(share_sum) + ", expected 1");
    }
    return weighted;
}

double cpa(const FabParameters& fab) {
    if (fab.yield_fraction <= 0.0 || fab.yield_fraction > 1.0) {
        throw InvalidQuantity("fab yield must lie in (0, 1]");
    }
    return (fab.fab_carbon_intensity * fab.energy_per_area + fab.gas_emissions_per_area +
            fab.materials_per_area) /
           fab.yield_fraction;
}

double cpu_embodied(double die_area_cm2, double cpa_g_per_cm2, int socket_count) {
    if (die_area_cm2 < 0 || cpa_g_per_cm2 < 0 || socket_count < 0) {
        throw InvalidQuantity("cpu_embodied arguments must be non-negative");
    }
    return die_area_cm2 * cpa_g_per_cm2 * static_cast<double>(socket_count);
}

EmbodiedBreakdown component_embodied(const HardwareProfile& profile) {
    EmbodiedBreakdown breakdown;
    breakdown.cpu_g = cpu_embodied(profile.cpu.die_area_cm2, cpa(profile.cpu.fab),
                                   profile.cpu.socket_count);
    breakdown.dram_g = profile.dram.capacity_gb * profile.dram.carbon_per_gb;
    for (const auto& device : profile.storage) {
        breakdown.storage_g += device.capacity_gb * device.carbon_per_gb;
    }
    breakdown.total_g = breakdown.cpu_g + breakdown.dram_g + breakdown.storage_g;
    return breakdown;
}

WaterBreakdown manufacturing_water(const HardwareProfile& profile) {
    WaterBreakdown breakdown;
    breakdown.cpu_l = profile.cpu.water_per_cm2 * profile.cpu.die_area_cm2 *
                      static_cast<double>(profile.cpu.socket_count);
    breakdown.dram_l = profile.dram.capacity_gb * profile.dram.water_per_gb;
    for (const auto& device : profile.storage) {
        breakdown.storage_l += device.capacity_gb * device.water_per_gb;
    }
    breakdown.total_l = breakdown.cpu_l + breakdown.dram_l + breakdown.storage_l;
    return breakdown;
}

namespace {

json load_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

double require_number(const json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw ConfigError(context + ": missing or non-numeric field '" + key + "'");
    }
    return obj[key].get<double>();
}

double require_nonnegative(const json& obj, const char* key, const std::string& context) {
    double v = require_number(obj, key, context);
    if (v < 0) throw ConfigError(context + ": field '" + key + "' must be non-negative");
    return v;
}

double require_positive(const json& obj, const char* key, const std::string& context) {
    double v = require_number(obj, key, context);
    if (v <= 0) throw ConfigError(context + ": field '" + key + "' must be positive");
    return v;
}

}  // namespace

HardwareProfile load_hardware_profile(const std::string& path) {
    return hardware_profile_from_json(load_json_file(path, "hardware profile"), path);
}

WaterFactorTable load_water_factors(const std::string& path) {
    return water_factors_from_json(load_json_file(path, "water factor table"), path);
}

HardwareProfile hardware_profile_from_json(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ConfigError("hardware profile must be a JSON object: " + path);
    HardwareProfile profile;
    profile.name = doc.value("name", std::string("unnamed"));

    if (!doc.contains("cpu") || !doc["cpu"].is_object())
        throw ConfigError(path + ": missing 'cpu' object");
    const json& cpu = doc["cpu"];
    profile.cpu.die_area_cm2 = require_positive(cpu, "die_area_cm2", path + ".cpu");
    profile.cpu.socket_count = static_cast<int>(require_positive(cpu, "socket_count", path + ".cpu"));
    profile.cpu.water_per_cm2 = require_nonnegative(cpu, "water_per_cm2", path + ".cpu");
    if (!cpu.contains("fab") || !cpu["fab"].is_object())
        throw ConfigError(path + ": missing 'cpu.fab' object");
    const json& fab = cpu["fab"];
    profile.cpu.fab.yield_fraction = require_positive(fab, "yield_fraction", path + ".cpu.fab");
    if (profile.cpu.fab.yield_fraction > 1.0)
        throw ConfigError(path + ".cpu.fab: yield_fraction must be in (0, 1]");
    profile.cpu.fab.energy_per_area = require_nonnegative(fab, "energy_per_area", path + ".cpu.fab");
    profile.cpu.fab.gas_emissions_per_area =
        require_nonnegative(fab, "gas_emissions_per_area", path + ".cpu.fab");
    profile.cpu.fab.materials_per_area =
        require_nonnegative(fab, "materials_per_area", path + ".cpu.fab");
    profile.cpu.fab.fab_carbon_intensity =
        require_nonnegative(fab, "fab_carbon_intensity", path + ".cpu.fab");

    if (!doc.contains("dram") || !doc["dram"].is_object())
        throw ConfigError(path + ": missing 'dram' object");
    const json& dram = doc["dram"];
    profile.dram.capacity_gb = require_positive(dram, "capacity_gb", path + ".dram");
    profile.dram.carbon_per_gb = require_nonnegative(dram, "carbon_per_gb", path + ".dram");
    profile.dram.water_per_gb = require_nonnegative(dram, "water_per_gb", path + ".dram");

    if (doc.contains("storage")) {
        if (!doc["storage"].is_array()) throw ConfigError(path + ": 'storage' must be an array");
        for (const auto& entry : doc["storage"]) {
            const std::string context = path + ".storage";
            StorageSpec device;
            if (!entry.contains("kind") || !entry["kind"].is_string())
                throw ConfigError(context + ": missing 'kind'");
            device.kind = storage_kind_from_string(entry["kind"].get<std::string>());
            device.capacity_gb = require_positive(entry, "capacity_gb", context);
            device.carbon_per_gb = require_nonnegative(entry, "carbon_per_gb", context);
            device.water_per_gb = require_nonnegative(entry, "water_per_gb", context);
            if (device.kind == StorageKind::ssd) {
                device.tbw_bytes = require_positive(entry, "tbw_bytes", context);
            } else if (entry.contains("tbw_bytes")) {
                throw ConfigError(context + ": tbw_bytes applies to ssd entries only");
            }
            profile.storage.push_back(device);
        }
    }
    return profile;
}

nlohmann::json hardware_profile_to_json(const HardwareProfile& profile) {
    json fab = {
        {"yield_fraction", profile.cpu.fab.yield_fraction},
        {"energy_per_area", profile.cpu.fab.energy_per_area},
        {"gas_emissions_per_area", profile.cpu.fab.gas_emissions_per_area},
        {"materials_per_area", profile.cpu.fab.materials_per_area},
        {"fab_carbon_intensity", profile.cpu.fab.fab_carbon_intensity},
    };
    json storage = json::array();
    for (const auto& device : profile.storage) {
        json entry = {
            {"kind", to_string(device.kind)},
            {"capacity_gb", device.capacity_gb},
            {"carbon_per_gb", device.carbon_per_gb},
            {"water_per_gb", device.water_per_gb},
        };
        if (device.tbw_bytes) entry["tbw_bytes"] = *device.tbw_bytes;
        storage.push_back(std::move(entry));
    }
    return json{
        {"name", profile.name},
        {"cpu",
         {{"die_area_cm2", profile.cpu.die_area_cm2},
          {"socket_count", profile.cpu.socket_count},
          {"fab", std::move(fab)},
          {"water_per_cm2", profile.cpu.water_per_cm2}}},
        {"dram",
         {{"capacity_gb", profile.dram.capacity_gb},
          {"carbon_per_gb", profile.dram.carbon_per_gb},
          {"water_per_gb", profile.dram.water_per_gb}}},
        {"storage", std::move(storage)},
    };
}

WaterFactorTable water_factors_from_json(const json& doc, const std::string& path) {
    if (!doc.is_object()) throw ConfigError("water factor table must be a JSON object: " + path);
    WaterFactorTable table;
    for (const auto& [key, value] : doc.items()) {
        GenerationSource source = generation_source_from_string(key);
        if (!value.is_number() || value.get<double>() < 0) {
            throw ConfigError(path + ": factor for '" + key + "' must be a non-negative number");
        }
        table.liters_per_mwh[source] = value.get<double>();
    }
    return table;
}

nlohmann::json water_factors_to_json(const WaterFactorTable& factors) {
    json doc = json::object();
    for (const auto& [source, liters] : factors.liters_per_mwh) {
        doc[to_string(source)] = liters;
    }
    return doc;
}

}  // namespace atlas
