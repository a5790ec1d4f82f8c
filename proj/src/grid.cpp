#include "atlas/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/units.hpp"

namespace atlas {

namespace {

constexpr const char* kGridCsvHeader =
    "timestamp,region,carbon_intensity_gco2_kwh,mix_biomass,mix_hydropower,mix_nuclear,"
    "mix_oil,mix_coal,mix_geothermal,mix_natural_gas,mix_solar,mix_wind";

const char* kSourceNames[kGenerationSourceCount] = {
    "biomass", "hydropower", "nuclear", "oil", "coal", "geothermal", "natural_gas", "solar", "wind",
};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw FormatError(context + ": bad number '" + text + "'");
    }
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(GenerationSource source) {
    return kSourceNames[static_cast<std::size_t>(source)];
}

GenerationSource generation_source_from_string(const std::string& name) {
    for (std::size_t i = 0; i < kGenerationSourceCount; ++i) {
        if (name == kSourceNames[i]) return static_cast<GenerationSource>(i);
    }
    throw UnknownSource("unknown generation source '" + name + "'");
}

std::optional<std::string> validate_mix(const GridSnapshot& snapshot) {
    if (snapshot.carbon_intensity_g_per_kwh < 0) {
        return "carbon intensity is negative (" + fmt_g17(snapshot.carbon_intensity_g_per_kwh) + ")";
    }
    double sum = 0.0;
    for (auto source : kAllGenerationSources) {
        double f = mix_fraction(snapshot.mix, source);
        if (f < 0.0 || f > 1.0) {
            return "mix fraction for " + to_string(source) + " outside [0,1] (" + fmt_g17(f) + ")";
        }
        sum += f;
    }
    if (std::abs(sum - 1.0) > kMixSumTolerance + kMixSumSlack) {
        return "mix fractions sum to " + fmt_g17(sum) + ", expected 1 +/- 1e-6";
    }
    return std::nullopt;
}

void GridDataset::add(GridSnapshot snapshot) {
    auto& series = by_region_[snapshot.region];
    if (!series.empty() && snapshot.timestamp <= series.back().timestamp) {
        throw OrderError("non-monotone timestamps for region " + snapshot.region);
    }
    series.push_back(std::move(snapshot));
    ++row_count_;
}

GridLookup GridDataset::lookup(const std::string& region, std::int64_t at) const {
    auto it = by_region_.find(region);
    if (it == by_region_.end() || it->second.empty()) {
        throw RegionNotFound("region '" + region + "' not in grid dataset");
    }
    const auto& series = it->second;
    auto pos = std::upper_bound(series.begin(), series.end(), at,
                                [](std::int64_t t, const GridSnapshot& s) { return t < s.timestamp; });
    if (pos == series.begin()) return GridLookup{series.front(), true};
    return GridLookup{*(pos - 1), false};
}

bool GridDataset::has_region(const std::string& region) const {
    return by_region_.count(region) != 0;
}

std::vector<std::string> GridDataset::regions() const {
    std::vector<std::string> names;
    names.reserve(by_region_.size());
    for (const auto& [region, series] : by_region_) names.push_back(region);
    return names;
}

GridDataset import_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open grid CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("grid CSV is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kGridCsvHeader) {
        throw FormatError("bad grid CSV header in " + path + ": '" + line + "'");
    }

    GridDataset dataset;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(row);
        auto fields = split_fields(line);
        if (fields.size() != 3 + kGenerationSourceCount) {
            throw FormatError(where + ": expected " + std::to_string(3 + kGenerationSourceCount) +
                              " fields, got " + std::to_string(fields.size()));
        }
        GridSnapshot snapshot;
        try {
            snapshot.timestamp = parse_iso8601_utc(fields[0]);
        } catch (const FormatError& e) {
            throw FormatError(where + ": " + e.what());
        }
        snapshot.region = fields[1];
        if (snapshot.region.empty()) throw FormatError(where + ": empty region code");
        snapshot.carbon_intensity_g_per_kwh = parse_double(fields[2], where);
        if (snapshot.carbon_intensity_g_per_kwh < 0) {
            throw FormatError(where + ": negative carbon intensity");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < kGenerationSourceCount; ++i) {
            double f = parse_double(fields[3 + i], where);
            if (f < 0.0 || f > 1.0) {
                throw FormatError(where + ": mix fraction outside [0,1]: " + fields[3 + i]);
            }
            snapshot.mix[i] = f;
            sum += f;
        }
        if (std::abs(sum - 1.0) > kImportMixSumTolerance) {
            throw MixSumError(where + ": mix fractions sum to " + fmt_g17(sum));
        }
        dataset.add(std::move(snapshot));
    }
    return dataset;
}

void export_grid_csv(const GridDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw WriteError("cannot open " + path + " for writing");
    out << kGridCsvHeader << "\n";
    for (const auto& [region, series] : dataset.by_region()) {
        for (const auto& s : series) {
            out << format_iso8601_utc(s.timestamp) << ',' << region << ','
                << fmt_g17(s.carbon_intensity_g_per_kwh);
            for (double f : s.mix) out << ',' << fmt_g17(f);
            out << '\n';
        }
    }
    if (!out.good()) throw WriteError("failed writing " + path);
}

}  // namespace atlas
