#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "atlas/analysis.hpp"
#include "atlas/footprint.hpp"
#include "atlas/grid.hpp"
#include "atlas/harness.hpp"

namespace atlas {

inline constexpr const char* kAtlasVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

struct ReportQueryRow {
    std::string query_id;
    int repetition = 0;
    double wall_time_s = 0.0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
    double carbon_g = 0.0;
    double water_l = 0.0;
    std::array<double, kGenerationSourceCount> water_by_source_l{};
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
    std::int64_t started_at_unix_ns = 0;
    std::optional<std::int64_t> row_count;
};

struct ReportTotals {
    double wall_time_s = 0.0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
    double carbon_g = 0.0;
    double water_l = 0.0;
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
};

struct ReportNormalized {
    std::uint64_t unit_size = 1000;
    double carbon_g = 0.0;
    double water_l = 0.0;
    double energy_j = 0.0;
};

/// Self-contained measurement report: embeds the grid snapshot, hardware
/// profile and water factors it was computed with, so every derived figure
/// can be reproduced from the document alone.
struct EnvReport {
    std::string tool_version = kAtlasVersion;
    std::string profile_name;
    std::string region;
    std::string timestamp;  // run start, ISO-8601 UTC
    std::string connector;
    std::uint64_t seed = 0;
    bool partial = false;
    std::optional<IdleBaseline> idle_baseline;

    GridSnapshot grid;
    HardwareProfile profile;
    WaterFactorTable factors;

    std::vector<ReportQueryRow> per_query;
    std::vector<QueryErrorRecord> errors;
    ReportTotals totals;
    std::optional<ReportNormalized> per_1000;

    std::optional<SciResult> sci;
    std::optional<BreakEvenResult> breakeven;
    std::optional<LifetimeReport> lifetime;
    std::optional<std::vector<RegionImpact>> regions;
};

/// Converts a finished run into a report by applying the grid conversion
/// to every energy figure.
EnvReport build_report(const WorkloadResult& run, const HardwareProfile& profile,
                       const GridSnapshot& grid, const WaterFactorTable& factors);

nlohmann::json report_to_json(const EnvReport& report);
EnvReport report_from_json(const nlohmann::json& doc);

/// Canonical serialization: keys sorted, floats at 17 significant digits,
/// UTF-8, trailing newline. Identical reports produce identical bytes.
void emit_json(const EnvReport& report, const std::string& path);
std::string report_to_canonical_string(const EnvReport& report);

EnvReport load_report(const std::string& path);

/// One row per QueryRunResult under the fixed header
/// `query_id,repetition,wall_time_s,cpu_energy_j,dram_energy_j,carbon_g,water_l,read_bytes,write_bytes`.
void emit_csv(const EnvReport& report, const std::string& path);

enum class PlotMetric { carbon, water, energy, power, write_io };

PlotMetric plot_metric_from_string(const std::string& name);

/// Two-column `label,value` CSV ordered by query_id; repetitions of a
/// query are averaged (power is energy-weighted).
void emit_plot_series(const EnvReport& report, PlotMetric metric, const std::string& path);

}  // namespace atlas
