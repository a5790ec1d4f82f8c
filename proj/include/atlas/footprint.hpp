#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "atlas/grid.hpp"

namespace atlas {

/// Blue-water consumption per unit of generated electricity, L/MWh.
/// Entries may be missing; conversion then fails with UnknownSource for
/// any source actually present in the mix.
struct WaterFactorTable {
    std::map<GenerationSource, double> liters_per_mwh;

    /// Median literature factors per source.
    static WaterFactorTable defaults();
};

/// Semiconductor fab parameters for the carbon-per-area model.
struct FabParameters {
    double yield_fraction = 0.0;        // Y, (0, 1]
    double energy_per_area = 0.0;       // EPA, kWh/cm^2
    double gas_emissions_per_area = 0.0;  // GPA, gCO2/cm^2
    double materials_per_area = 0.0;    // MPA, gCO2/cm^2
    double fab_carbon_intensity = 0.0;  // CI_fab, gCO2/kWh
};

enum class StorageKind { hdd, ssd };

std::string to_string(StorageKind kind);
StorageKind storage_kind_from_string(const std::string& name);

struct CpuSpec {
    double die_area_cm2 = 0.0;  // per socket
    int socket_count = 1;
    FabParameters fab;
    double water_per_cm2 = 0.0;  // L/cm^2
};

struct DramSpec {
    double capacity_gb = 0.0;
    double carbon_per_gb = 0.0;  // gCO2e/GB
    double water_per_gb = 0.0;   // L/GB
};

struct StorageSpec {
    StorageKind kind = StorageKind::hdd;
    double capacity_gb = 0.0;
    double carbon_per_gb = 0.0;              // gCO2e/GB
    double water_per_gb = 0.0;               // L/GB
    std::optional<double> tbw_bytes;         // write endurance; ssd only
};

/// Everything the embodied/manufacturing models need to know about the
/// measured server.
struct HardwareProfile {
    std::string name;
    CpuSpec cpu;
    DramSpec dram;
    std::vector<StorageSpec> storage;

    /// First SSD entry, if any; the wear model applies writes to it.
    const StorageSpec* primary_ssd() const;
};

struct EmbodiedBreakdown {
    double cpu_g = 0.0;
    double dram_g = 0.0;
    double storage_g = 0.0;
    double total_g = 0.0;
};

struct WaterBreakdown {
    double cpu_l = 0.0;
    double dram_l = 0.0;
    double storage_l = 0.0;
    double total_l = 0.0;
};

struct OperationalWater {
    double total_l = 0.0;
    std::array<double, kGenerationSourceCount> per_source_l{};
};

/// O = I_E x E_op. Energy in kWh, intensity in gCO2/kWh, result in grams.
double operational_carbon(double energy_kwh, double intensity_g_per_kwh);

/// Mix-weighted blue water for the given energy. Energy in MWh; returns
/// the total and the addend per generation source.
OperationalWater operational_water(double energy_mwh, const GenerationMix& mix,
                                   const WaterFactorTable& factors);

/// Share-weighted mean carbon intensity of a fab's supply mix. Shares must
/// sum to 1 within 1e-6.
double fab_carbon_intensity(const std::vector<std::pair<double, double>>& intensity_share);

/// Carbon per die area: (1/Y) x (CI_fab x EPA + GPA + MPA), gCO2/cm^2.
double cpa(const FabParameters& fab);

/// die_area x cpa x sockets, grams.
double cpu_embodied(double die_area_cm2, double cpa_g_per_cm2, int socket_count);

/// Embodied carbon of the whole profile: CPU through the area model, DRAM
/// and storage through per-GB factors.
EmbodiedBreakdown component_embodied(const HardwareProfile& profile);

/// Manufacturing water of the whole profile: CPU per-cm^2, DRAM and
/// storage per-GB.
WaterBreakdown manufacturing_water(const HardwareProfile& profile);

/// Reads a hardware profile from its JSON document form. Field names match
/// the struct members. Throws ConfigError on missing/invalid fields.
HardwareProfile load_hardware_profile(const std::string& path);

/// Reads a {source: liters-per-MWh} JSON document.
WaterFactorTable load_water_factors(const std::string& path);

HardwareProfile hardware_profile_from_json(const nlohmann::json& doc, const std::string& context);
nlohmann::json hardware_profile_to_json(const HardwareProfile& profile);
WaterFactorTable water_factors_from_json(const nlohmann::json& doc, const std::string& context);
nlohmann::json water_factors_to_json(const WaterFactorTable& factors);

}  // namespace atlas
