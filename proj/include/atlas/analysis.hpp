#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/footprint.hpp"
#include "atlas/grid.hpp"

namespace atlas {

/// Queries (and days of back-to-back execution) until cumulative
/// operational carbon equals the embodied investment. Both fields are
/// +infinity exactly when per-query operational carbon is zero.
struct BreakEvenResult {
    double queries = 0.0;
    double days_continuous = 0.0;

    bool finite() const;
};

struct SciResult {
    std::string functional_unit;
    double operational_g = 0.0;
    double amortized_embodied_g = 0.0;
    double units = 0.0;
    double sci_g_per_unit = 0.0;
};

struct EnduranceResult {
    std::uint64_t total_units = 1;   // devices consumed over the horizon
    std::uint64_t replacements = 0;  // total_units - 1
};

/// Mean per-execution measurements, the input to lifetime projections.
struct PerQueryAggregate {
    double wall_s = 0.0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
    double read_bytes = 0.0;
    double write_bytes = 0.0;

    double energy_j() const { return cpu_energy_j + dram_energy_j; }
};

/// Operational + manufacturing footprint over a server lifespan, with
/// storage replacements folded in.
struct LifetimeReport {
    double horizon_years = 0.0;
    double duty_queries_per_day = 0.0;
    double operational_carbon_g = 0.0;
    double embodied_carbon_g = 0.0;       // initial + replacements
    double operational_water_l = 0.0;
    double manufacturing_water_l = 0.0;   // initial + replacements
    std::uint64_t ssd_replacements = 0;
    double total_carbon_g = 0.0;
    double total_water_l = 0.0;
    /// Set when writes occur but the profile has no SSD to wear out.
    bool unbounded_wear_warning = false;
};

struct RegionImpact {
    std::string region;
    double carbon_g = 0.0;
    double water_l = 0.0;
};

/// Normalizes a total to `unit_size` executions (default: per 1,000).
double per_unit(double total, std::uint64_t executions, std::uint64_t unit_size = 1000);

/// Software carbon intensity: operational plus time-proportionally
/// amortized embodied carbon, per unit of work.
SciResult sci(double operational_g, double embodied_total_g, double run_duration_s,
              double lifespan_s, double units, std::string functional_unit = "");

/// Smallest query count whose cumulative operational carbon reaches the
/// embodied investment, and the continuous-operation days it represents.
BreakEvenResult breakeven(double embodied_g, double per_query_operational_g,
                          double per_query_seconds);

double avg_power(double energy_j, double duration_s);

/// Devices consumed when `annual_write_bytes` accrue for `horizon_years`
/// against a TBW rating.
EnduranceResult ssd_endurance(double annual_write_bytes, double tbw_bytes, double horizon_years);

/// Projects per-query measurements over a lifespan: operational carbon and
/// water from the lifetime energy, manufacturing from the initial profile
/// plus SSD replacements driven by the projected write volume.
LifetimeReport lifetime_footprint(const HardwareProfile& profile, const PerQueryAggregate& per_query,
                                  const GridSnapshot& grid, const WaterFactorTable& factors,
                                  double horizon_years, double duty_queries_per_day);

/// One {carbon, water} row per region for a fixed energy, using each
/// region's snapshot at `at`.
std::vector<RegionImpact> region_compare(double energy_kwh, const GridDataset& dataset,
                                         const std::vector<std::string>& regions, std::int64_t at,
                                         const WaterFactorTable& factors);

}  // namespace atlas
