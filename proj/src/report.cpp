#include "atlas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "atlas/errors.hpp"
#include "atlas/units.hpp"

using nlohmann::json;

namespace atlas {

namespace {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

// Keys come out sorted because nlohmann's object is a std::map.
void write_canonical(const json& value, std::string& out) {
    switch (value.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, child] : value.items()) {
                if (!first) out += ',';
                first = false;
                escape_string(key, out);
                out += ':';
                write_canonical(child, out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& child : value) {
                if (!first) out += ',';
                first = false;
                write_canonical(child, out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            escape_string(value.get<std::string>(), out);
            break;
        case json::value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(value.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(value.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += fmt_g17(value.get<double>());
            break;
        default:
            out += "null";
    }
}

json mix_to_json(const GenerationMix& mix) {
    json obj = json::object();
    for (auto source : kAllGenerationSources) {
        obj[to_string(source)] = mix_fraction(mix, source);
    }
    return obj;
}

GenerationMix mix_from_json(const json& obj) {
    GenerationMix mix{};
    for (const auto& [key, value] : obj.items()) {
        mix[static_cast<std::size_t>(generation_source_from_string(key))] = value.get<double>();
    }
    return mix;
}

json grid_to_json(const GridSnapshot& grid) {
    return json{
        {"region", grid.region},
        {"timestamp", format_iso8601_utc(grid.timestamp)},
        {"carbon_intensity_gco2_kwh", grid.carbon_intensity_g_per_kwh},
        {"mix", mix_to_json(grid.mix)},
    };
}

GridSnapshot grid_from_json(const json& obj) {
    GridSnapshot grid;
    grid.region = obj.at("region").get<std::string>();
    grid.timestamp = parse_iso8601_utc(obj.at("timestamp").get<std::string>());
    grid.carbon_intensity_g_per_kwh = obj.at("carbon_intensity_gco2_kwh").get<double>();
    grid.mix = mix_from_json(obj.at("mix"));
    return grid;
}

double query_carbon(double cpu_j, double dram_j, const GridSnapshot& grid) {
    return operational_carbon(kwh_from_joules(cpu_j + dram_j), grid.carbon_intensity_g_per_kwh);
}

OperationalWater query_water(double cpu_j, double dram_j, const GridSnapshot& grid,
                             const WaterFactorTable& factors) {
    return operational_water(mwh_from_joules(cpu_j + dram_j), grid.mix, factors);
}

}  // namespace

EnvReport build_report(const WorkloadResult& run, const HardwareProfile& profile,
                       const GridSnapshot& grid, const WaterFactorTable& factors) {
    EnvReport report;
    report.profile_name = profile.name;
    report.region = grid.region;
    report.timestamp = format_iso8601_utc(run.run_started_at_unix_ns / 1'000'000'000);
    report.connector = run.connector_name;
    report.seed = run.seed_used;
    report.partial = run.partial();
    report.idle_baseline = run.idle_baseline;
    report.grid = grid;
    report.profile = profile;
    report.factors = factors;
    report.errors = run.errors;

    for (const auto& r : run.results) {
        ReportQueryRow row;
        row.query_id = r.query_id;
        row.repetition = r.repetition_index;
        row.wall_time_s = r.wall_time_s;
        row.cpu_energy_j = r.cpu_energy_j;
        row.dram_energy_j = r.dram_energy_j;
        row.carbon_g = query_carbon(r.cpu_energy_j, r.dram_energy_j, grid);
        OperationalWater water = query_water(r.cpu_energy_j, r.dram_energy_j, grid, factors);
        row.water_l = water.total_l;
        row.water_by_source_l = water.per_source_l;
        row.read_bytes = r.read_bytes;
        row.write_bytes = r.write_bytes;
        row.started_at_unix_ns = r.started_at_unix_ns;
        row.row_count = r.row_count;
        report.per_query.push_back(std::move(row));
    }

    report.totals.wall_time_s = run.totals.wall_s;
    report.totals.cpu_energy_j = run.totals.cpu_energy_j;
    report.totals.dram_energy_j = run.totals.dram_energy_j;
    report.totals.carbon_g = query_carbon(run.totals.cpu_energy_j, run.totals.dram_energy_j, grid);
    report.totals.water_l =
        query_water(run.totals.cpu_energy_j, run.totals.dram_energy_j, grid, factors).total_l;
    report.totals.read_bytes = run.totals.read_bytes;
    report.totals.write_bytes = run.totals.write_bytes;

    if (!report.per_query.empty()) {
        double carbon_sum = 0.0, water_sum = 0.0, energy_sum = 0.0;
        for (const auto& row : report.per_query) {
            carbon_sum += row.carbon_g;
            water_sum += row.water_l;
            energy_sum += row.cpu_energy_j + row.dram_energy_j;
        }
        ReportNormalized norm;
        norm.carbon_g = per_unit(carbon_sum, report.per_query.size());
        norm.water_l = per_unit(water_sum, report.per_query.size());
        norm.energy_j = per_unit(energy_sum, report.per_query.size());
        report.per_1000 = norm;
    }
    return report;
}

json report_to_json(const EnvReport& report) {
    json metadata = {
        {"tool_version", report.tool_version},
        {"hardware_profile", report.profile_name},
        {"grid_region", report.region},
        {"timestamp", report.timestamp},
        {"connector", report.connector},
        {"seed", report.seed},
        {"partial", report.partial},
    };
    if (report.idle_baseline) {
        metadata["idle_baseline"] = {
            {"seconds", report.idle_baseline->seconds},
            {"cpu_w", report.idle_baseline->cpu_w},
            {"dram_w", report.idle_baseline->dram_w},
        };
    }

    json per_query = json::array();
    for (const auto& row : report.per_query) {
        json r = {
            {"query_id", row.query_id},
            {"repetition", row.repetition},
            {"wall_time_s", row.wall_time_s},
            {"cpu_energy_j", row.cpu_energy_j},
            {"dram_energy_j", row.dram_energy_j},
            {"carbon_g", row.carbon_g},
            {"water_l", row.water_l},
            {"water_by_source_l", mix_to_json(row.water_by_source_l)},
            {"read_bytes", row.read_bytes},
            {"write_bytes", row.write_bytes},
            {"started_at_unix_ns", row.started_at_unix_ns},
        };
        if (row.row_count) r["row_count"] = *row.row_count;
        per_query.push_back(std::move(r));
    }

    json errors = json::array();
    for (const auto& e : report.errors) {
        errors.push_back(
            {{"query_id", e.query_id}, {"repetition", e.repetition_index}, {"message", e.message}});
    }

    json aggregates = {
        {"totals",
         {{"wall_time_s", report.totals.wall_time_s},
          {"cpu_energy_j", report.totals.cpu_energy_j},
          {"dram_energy_j", report.totals.dram_energy_j},
          {"carbon_g", report.totals.carbon_g},
          {"water_l", report.totals.water_l},
          {"read_bytes", report.totals.read_bytes},
          {"write_bytes", report.totals.write_bytes}}},
        {"executions", report.per_query.size()},
    };
    if (report.per_1000) {
        aggregates["per_1000"] = {
            {"unit_size", report.per_1000->unit_size},
            {"carbon_g", report.per_1000->carbon_g},
            {"water_l", report.per_1000->water_l},
            {"energy_j", report.per_1000->energy_j},
        };
    }

    json analyses = json::object();
    if (report.sci) {
        analyses["sci"] = {
            {"functional_unit", report.sci->functional_unit},
            {"operational_g", report.sci->operational_g},
            {"amortized_embodied_g", report.sci->amortized_embodied_g},
            {"units", report.sci->units},
            {"sci_g_per_unit", report.sci->sci_g_per_unit},
            {"amortization", "time-proportional"},
        };
    }
    if (report.breakeven) {
        json b = {{"finite", report.breakeven->finite()}};
        if (report.breakeven->finite()) {
            b["queries"] = report.breakeven->queries;
            b["days_continuous"] = report.breakeven->days_continuous;
        } else {
            b["queries"] = nullptr;
            b["days_continuous"] = nullptr;
        }
        analyses["breakeven"] = std::move(b);
    }
    if (report.lifetime) {
        analyses["lifetime"] = {
            {"horizon_years", report.lifetime->horizon_years},
            {"duty_queries_per_day", report.lifetime->duty_queries_per_day},
            {"operational_carbon_g", report.lifetime->operational_carbon_g},
            {"embodied_carbon_g", report.lifetime->embodied_carbon_g},
            {"operational_water_l", report.lifetime->operational_water_l},
            {"manufacturing_water_l", report.lifetime->manufacturing_water_l},
            {"ssd_replacements", report.lifetime->ssd_replacements},
            {"total_carbon_g", report.lifetime->total_carbon_g},
            {"total_water_l", report.lifetime->total_water_l},
            {"unbounded_wear_warning", report.lifetime->unbounded_wear_warning},
        };
    }
    if (report.regions) {
        json rows = json::array();
        for (const auto& row : *report.regions) {
            rows.push_back(
                {{"region", row.region}, {"carbon_g", row.carbon_g}, {"water_l", row.water_l}});
        }
        analyses["regions"] = std::move(rows);
    }

    return json{
        {"format_version", kReportFormatVersion},
        {"metadata", std::move(metadata)},
        {"grid_snapshot", grid_to_json(report.grid)},
        {"hardware_profile", hardware_profile_to_json(report.profile)},
        {"water_factors", water_factors_to_json(report.factors)},
        {"per_query", std::move(per_query)},
        {"errors", std::move(errors)},
        {"aggregates", std::move(aggregates)},
        {"analyses", std::move(analyses)},
    };
}

EnvReport report_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format_version", 0) != kReportFormatVersion) {
        throw ConfigError("unsupported report format (expected format_version 1)");
    }
    EnvReport report;
    const json& metadata = doc.at("metadata");
    report.tool_version = metadata.value("tool_version", std::string());
    report.profile_name = metadata.value("hardware_profile", std::string());
    report.region = metadata.value("grid_region", std::string());
    report.timestamp = metadata.value("timestamp", std::string());
    report.connector = metadata.value("connector", std::string());
    report.seed = metadata.value("seed", std::uint64_t{0});
    report.partial = metadata.value("partial", false);
    if (metadata.contains("idle_baseline")) {
        const json& idle = metadata["idle_baseline"];
        report.idle_baseline = IdleBaseline{idle.at("seconds").get<double>(),
                                            idle.at("cpu_w").get<double>(),
                                            idle.at("dram_w").get<double>()};
    }

    report.grid = grid_from_json(doc.at("grid_snapshot"));
    report.profile = hardware_profile_from_json(doc.at("hardware_profile"), "report.hardware_profile");
    report.factors = water_factors_from_json(doc.at("water_factors"), "report.water_factors");

    for (const auto& r : doc.at("per_query")) {
        ReportQueryRow row;
        row.query_id = r.at("query_id").get<std::string>();
        row.repetition = r.at("repetition").get<int>();
        row.wall_time_s = r.at("wall_time_s").get<double>();
        row.cpu_energy_j = r.at("cpu_energy_j").get<double>();
        row.dram_energy_j = r.at("dram_energy_j").get<double>();
        row.carbon_g = r.at("carbon_g").get<double>();
        row.water_l = r.at("water_l").get<double>();
        row.water_by_source_l = mix_from_json(r.at("water_by_source_l"));
        row.read_bytes = r.at("read_bytes").get<std::uint64_t>();
        row.write_bytes = r.at("write_bytes").get<std::uint64_t>();
        row.started_at_unix_ns = r.at("started_at_unix_ns").get<std::int64_t>();
        if (r.contains("row_count")) row.row_count = r["row_count"].get<std::int64_t>();
        report.per_query.push_back(std::move(row));
    }

    if (doc.contains("errors")) {
        for (const auto& e : doc["errors"]) {
            report.errors.push_back(QueryErrorRecord{e.at("query_id").get<std::string>(),
                                                     e.at("repetition").get<int>(),
                                                     e.at("message").get<std::string>()});
        }
    }

    const json& aggregates = doc.at("aggregates");
    const json& totals = aggregates.at("totals");
    report.totals.wall_time_s = totals.at("wall_time_s").get<double>();
    report.totals.cpu_energy_j = totals.at("cpu_energy_j").get<double>();
    report.totals.dram_energy_j = totals.at("dram_energy_j").get<double>();
    report.totals.carbon_g = totals.at("carbon_g").get<double>();
    report.totals.water_l = totals.at("water_l").get<double>();
    report.totals.read_bytes = totals.at("read_bytes").get<std::uint64_t>();
    report.totals.write_bytes = totals.at("write_bytes").get<std::uint64_t>();
    if (aggregates.contains("per_1000")) {
        const json& norm = aggregates["per_1000"];
        ReportNormalized per_1000;
        per_1000.unit_size = norm.at("unit_size").get<std::uint64_t>();
        per_1000.carbon_g = norm.at("carbon_g").get<double>();
        per_1000.water_l = norm.at("water_l").get<double>();
        per_1000.energy_j = norm.at("energy_j").get<double>();
        report.per_1000 = per_1000;
    }

    if (doc.contains("analyses")) {
        const json& analyses = doc["analyses"];
        if (analyses.contains("sci")) {
            const json& s = analyses["sci"];
            SciResult sci_result;
            sci_result.functional_unit = s.at("functional_unit").get<std::string>();
            sci_result.operational_g = s.at("operational_g").get<double>();
            sci_result.amortized_embodied_g = s.at("amortized_embodied_g").get<double>();
            sci_result.units = s.at("units").get<double>();
            sci_result.sci_g_per_unit = s.at("sci_g_per_unit").get<double>();
            report.sci = std::move(sci_result);
        }
        if (analyses.contains("breakeven")) {
            const json& b = analyses["breakeven"];
            BreakEvenResult breakeven_result;
            if (b.at("finite").get<bool>()) {
                breakeven_result.queries = b.at("queries").get<double>();
                breakeven_result.days_continuous = b.at("days_continuous").get<double>();
            } else {
                breakeven_result.queries = std::numeric_limits<double>::infinity();
                breakeven_result.days_continuous = std::numeric_limits<double>::infinity();
            }
            report.breakeven = breakeven_result;
        }
        if (analyses.contains("lifetime")) {
            const json& l = analyses["lifetime"];
            LifetimeReport lifetime;
            lifetime.horizon_years = l.at("horizon_years").get<double>();
            lifetime.duty_queries_per_day = l.at("duty_queries_per_day").get<double>();
            lifetime.operational_carbon_g = l.at("operational_carbon_g").get<double>();
            lifetime.embodied_carbon_g = l.at("embodied_carbon_g").get<double>();
            lifetime.operational_water_l = l.at("operational_water_l").get<double>();
            lifetime.manufacturing_water_l = l.at("manufacturing_water_l").get<double>();
            lifetime.ssd_replacements = l.at("ssd_replacements").get<std::uint64_t>();
            lifetime.total_carbon_g = l.at("total_carbon_g").get<double>();
            lifetime.total_water_l = l.at("total_water_l").get<double>();
            lifetime.unbounded_wear_warning = l.at("unbounded_wear_warning").get<bool>();
            report.lifetime = lifetime;
        }
        if (analyses.contains("regions")) {
            std::vector<RegionImpact> rows;
            for (const auto& r : analyses["regions"]) {
                rows.push_back(RegionImpact{r.at("region").get<std::string>(),
                                            r.at("carbon_g").get<double>(),
                                            r.at("water_l").get<double>()});
            }
            report.regions = std::move(rows);
        }
    }
    return report;
}

std::string report_to_canonical_string(const EnvReport& report) {
    std::string out;
    write_canonical(report_to_json(report), out);
    out += '\n';
    return out;
}

void emit_json(const EnvReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WriteError("cannot open " + path + " for writing");
    out << report_to_canonical_string(report);
    if (!out.good()) throw WriteError("failed writing " + path);
}

EnvReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open report: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return report_from_json(doc);
}

void emit_csv(const EnvReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw WriteError("cannot open " + path + " for writing");
    out << "query_id,repetition,wall_time_s,cpu_energy_j,dram_energy_j,carbon_g,water_l,"
           "read_bytes,write_bytes\n";
    for (const auto& row : report.per_query) {
        out << row.query_id << ',' << row.repetition << ',' << fmt_g17(row.wall_time_s) << ','
            << fmt_g17(row.cpu_energy_j) << ',' << fmt_g17(row.dram_energy_j) << ','
            << fmt_g17(row.carbon_g) << ',' << fmt_g17(row.water_l) << ',' << row.read_bytes << ','
            << row.write_bytes << '\n';
    }
    if (!out.good()) throw WriteError("failed writing " + path);
}

PlotMetric plot_metric_from_string(const std::string& name) {
    if (name == "carbon") return PlotMetric::carbon;
    if (name == "water") return PlotMetric::water;
    if (name == "energy") return PlotMetric::energy;
    if (name == "power") return PlotMetric::power;
    if (name == "write_io") return PlotMetric::write_io;
    throw MetricUnavailable("unknown plot metric '" + name +
                            "' (carbon, water, energy, power, write_io)");
}

void emit_plot_series(const EnvReport& report, PlotMetric metric, const std::string& path) {
    struct Group {
        double carbon = 0, water = 0, energy = 0, wall = 0, write_bytes = 0;
        std::size_t count = 0;
    };
    std::map<std::string, Group> groups;
    for (const auto& row : report.per_query) {
        Group& g = groups[row.query_id];
        g.carbon += row.carbon_g;
        g.water += row.water_l;
        g.energy += row.cpu_energy_j + row.dram_energy_j;
        g.wall += row.wall_time_s;
        g.write_bytes += static_cast<double>(row.write_bytes);
        g.count += 1;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw WriteError("cannot open " + path + " for writing");
    out << "label,value\n";
    for (const auto& [query_id, g] : groups) {
        double n = static_cast<double>(g.count);
        double value = 0.0;
        switch (metric) {
            case PlotMetric::carbon: value = g.carbon / n; break;
            case PlotMetric::water: value = g.water / n; break;
            case PlotMetric::energy: value = g.energy / n; break;
            case PlotMetric::power: value = g.wall > 0 ? g.energy / g.wall : 0.0; break;
            case PlotMetric::write_io: value = g.write_bytes / n; break;
        }
        out << query_id << ',' << fmt_g17(value) << '\n';
    }
    if (!out.good()) throw WriteError("failed writing " + path);
}

}  // namespace atlas
