#include "atlas/analysis.hpp"

#include <cmath>
#include <limits>

#include "atlas/errors.hpp"
#include "atlas/units.hpp"

namespace atlas {

bool BreakEvenResult::finite() const { return std::isfinite(queries); }

double per_unit(double total, std::uint64_t executions, std::uint64_t unit_size) {
    if (executions == 0) throw InvalidCount("per_unit needs at least one execution");
    return total * static_cast<double>(unit_size) / static_cast<double>(executions);
}

SciResult sci(double operational_g, double embodied_total_g, double run_duration_s,
              double lifespan_s, double units, std::string functional_unit) {
    if (lifespan_s <= 0) throw InvalidDuration("lifespan must be positive");
    if (units <= 0) throw InvalidCount("unit count must be positive");
    if (operational_g < 0 || embodied_total_g < 0 || run_duration_s < 0) {
        throw InvalidQuantity("sci inputs must be non-negative");
    }
    SciResult result;
    result.functional_unit = std::move(functional_unit);
    result.operational_g = operational_g;
    result.amortized_embodied_g = embodied_total_g * run_duration_s / lifespan_s;
    result.units = units;
    result.sci_g_per_unit = (result.operational_g + result.amortized_embodied_g) / units;
    return result;
}

BreakEvenResult breakeven(double embodied_g, double per_query_operational_g,
                          double per_query_seconds) {
    if (embodied_g < 0 || per_query_operational_g < 0 || per_query_seconds < 0) {
        throw InvalidQuantity("breakeven inputs must be non-negative");
    }
    BreakEvenResult result;
    if (per_query_operational_g == 0.0) {
        result.queries = std::numeric_limits<double>::infinity();
        result.days_continuous = std::numeric_limits<double>::infinity();
        return result;
    }
    // Smallest integer q with q * per_query >= embodied. Start from the
    // rounded quotient and nudge, so the result is exact even when the
    // division rounds across an integer boundary.
    double q = std::ceil(embodied_g / per_query_operational_g);
    while (q > 0 && (q - 1) * per_query_operational_g >= embodied_g) q -= 1;
    while (q * per_query_operational_g < embodied_g) q += 1;
    result.queries = q;
    result.days_continuous = q * per_query_seconds / kSecondsPerDay;
    return result;
}

double avg_power(double energy_j, double duration_s) {
    if (duration_s <= 0) throw InvalidDuration("duration must be positive");
    if (energy_j < 0) throw InvalidQuantity("energy must be non-negative");
    return energy_j / duration_s;
}

EnduranceResult ssd_endurance(double annual_write_bytes, double tbw_bytes, double horizon_years) {
    if (tbw_bytes <= 0) throw InvalidQuantity("tbw must be positive");
    if (annual_write_bytes < 0 || horizon_years < 0) {
        throw InvalidQuantity("write volume and horizon must be non-negative");
    }
    double lifetime_bytes = annual_write_bytes * horizon_years;
    double units = std::ceil(lifetime_bytes / tbw_bytes);
    while (units > 1 && (units - 1) * tbw_bytes >= lifetime_bytes) units -= 1;
    while (units * tbw_bytes < lifetime_bytes) units += 1;
    if (units < 1) units = 1;
    EnduranceResult result;
    result.total_units = static_cast<std::uint64_t>(units);
    result.replacements = result.total_units - 1;
    return result;
}

LifetimeReport lifetime_footprint(const HardwareProfile& profile, const PerQueryAggregate& per_query,
                                  const GridSnapshot& grid, const WaterFactorTable& factors,
                                  double horizon_years, double duty_queries_per_day) {
    if (horizon_years < 0 || duty_queries_per_day < 0) {
        throw InvalidQuantity("horizon and duty must be non-negative");
    }
    LifetimeReport report;
    report.horizon_years = horizon_years;
    report.duty_queries_per_day = duty_queries_per_day;

    double days = horizon_years * kDaysPerYear;
    double total_queries = duty_queries_per_day * days;
    double lifetime_energy_j = per_query.energy_j() * total_queries;
    report.operational_carbon_g =
        operational_carbon(kwh_from_joules(lifetime_energy_j), grid.carbon_intensity_g_per_kwh);
    report.operational_water_l =
        operational_water(mwh_from_joules(lifetime_energy_j), grid.mix, factors).total_l;

    EmbodiedBreakdown embodied = component_embodied(profile);
    WaterBreakdown water = manufacturing_water(profile);
    report.embodied_carbon_g = embodied.total_g;
    report.manufacturing_water_l = water.total_l;

    double annual_write_bytes = per_query.write_bytes * duty_queries_per_day * kDaysPerYear;
    const StorageSpec* ssd = profile.primary_ssd();
    if (ssd != nullptr) {
        EnduranceResult endurance = ssd_endurance(annual_write_bytes, *ssd->tbw_bytes, horizon_years);
        report.ssd_replacements = endurance.replacements;
        double repl = static_cast<double>(endurance.replacements);
        report.embodied_carbon_g += repl * ssd->capacity_gb * ssd->carbon_per_gb;
        report.manufacturing_water_l += repl * ssd->capacity_gb * ssd->water_per_gb;
    } else if (annual_write_bytes > 0 && horizon_years > 0) {
        report.unbounded_wear_warning = true;
    }

    report.total_carbon_g = report.operational_carbon_g + report.embodied_carbon_g;
    report.total_water_l = report.operational_water_l + report.manufacturing_water_l;
    return report;
}

std::vector<RegionImpact> region_compare(double energy_kwh, const GridDataset& dataset,
                                         const std::vector<std::string>& regions, std::int64_t at,
                                         const WaterFactorTable& factors) {
    std::vector<RegionImpact> rows;
    rows.reserve(regions.size());
    for (const auto& region : regions) {
        GridLookup found = dataset.lookup(region, at);
        RegionImpact row;
        row.region = region;
        row.carbon_g = operational_carbon(energy_kwh, found.snapshot.carbon_intensity_g_per_kwh);
        row.water_l = operational_water(energy_kwh / 1e3, found.snapshot.mix, factors).total_l;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace atlas
