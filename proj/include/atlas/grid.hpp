#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace atlas {

/// Electricity generation technologies tracked by the water-footprint
/// accounting. Closed set; order matches the grid CSV mix columns.
enum class GenerationSource {
    biomass,
    hydropower,
    nuclear,
    oil,
    coal,
    geothermal,
    natural_gas,
    solar,
    wind,
};

inline constexpr std::size_t kGenerationSourceCount = 9;

inline constexpr std::array<GenerationSource, kGenerationSourceCount> kAllGenerationSources = {
    GenerationSource::biomass,     GenerationSource::hydropower, GenerationSource::nuclear,
    GenerationSource::oil,         GenerationSource::coal,       GenerationSource::geothermal,
    GenerationSource::natural_gas, GenerationSource::solar,      GenerationSource::wind,
};

std::string to_string(GenerationSource source);
GenerationSource generation_source_from_string(const std::string& name);

/// Fraction of generation per source; a dense map over the closed enum.
using GenerationMix = std::array<double, kGenerationSourceCount>;

inline double mix_fraction(const GenerationMix& mix, GenerationSource s) {
    return mix[static_cast<std::size_t>(s)];
}

/// A region's carbon intensity and generation mix at one instant.
struct GridSnapshot {
    std::string region;
    std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
    double carbon_intensity_g_per_kwh = 0.0;
    GenerationMix mix{};

    bool operator==(const GridSnapshot&) const = default;
};

/// Mix fractions must sum to 1 within this tolerance (validate_mix); the
/// small absolute slack absorbs decimal-to-binary rounding of fractions
/// parsed from text.
inline constexpr double kMixSumTolerance = 1e-6;
inline constexpr double kMixSumSlack = 1e-12;
/// Looser gate applied at CSV import.
inline constexpr double kImportMixSumTolerance = 1e-3;

/// Checks the GridSnapshot invariants; returns a violation description or
/// nullopt when the snapshot is well-formed.
std::optional<std::string> validate_mix(const GridSnapshot& snapshot);

struct GridLookup {
    GridSnapshot snapshot;
    /// Set when `at` precedes every snapshot for the region and the
    /// earliest one was returned.
    bool extrapolated = false;
};

/// Snapshots indexed by (region, timestamp); immutable after import.
class GridDataset {
public:
    /// Adds a snapshot, enforcing strictly increasing timestamps per
    /// region.
    void add(GridSnapshot snapshot);

    /// Step-function lookup: the snapshot with the greatest timestamp <=
    /// `at`. Throws RegionNotFound for unknown regions.
    GridLookup lookup(const std::string& region, std::int64_t at) const;

    bool has_region(const std::string& region) const;
    std::vector<std::string> regions() const;
    std::size_t size() const { return row_count_; }
    const std::map<std::string, std::vector<GridSnapshot>>& by_region() const { return by_region_; }

    bool operator==(const GridDataset&) const = default;

private:
    std::map<std::string, std::vector<GridSnapshot>> by_region_;
    std::size_t row_count_ = 0;
};

/// Loads a grid CSV (header fixed, timestamps ISO-8601 UTC). Throws
/// FormatError for a bad header or malformed values, MixSumError when a
/// row's fractions sum more than 1e-3 away from 1, and OrderError for
/// non-monotone timestamps within a region.
GridDataset import_grid_csv(const std::string& path);

/// Writes a dataset back out in the import format, regions alphabetical,
/// numbers at full round-trip precision.
void export_grid_csv(const GridDataset& dataset, const std::string& path);

}  // namespace atlas
