#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace atlas {

enum class DomainKind { package, dram };

std::string to_string(DomainKind kind);

/// One cumulative energy counter sample for a single RAPL-style domain.
/// Counters count microjoules and wrap at max_range_uj.
struct DomainCounter {
    DomainKind kind = DomainKind::package;
    int domain_id = 0;
    std::uint64_t cumulative_uj = 0;
    std::uint64_t max_range_uj = 0;
    std::int64_t timestamp_ns = 0;
};

/// Ordered samples for one (kind, id) domain. Timestamps strictly increase
/// and every sample shares max_range_uj.
struct DomainSeries {
    DomainKind kind = DomainKind::package;
    int domain_id = 0;
    std::uint64_t max_range_uj = 0;
    std::vector<std::int64_t> timestamps_ns;
    std::vector<std::uint64_t> cumulative_uj;

    std::size_t size() const { return timestamps_ns.size(); }
};

struct EnergyTrace {
    std::vector<DomainSeries> domains;
    std::int64_t sampling_interval_ns = 0;

    bool empty() const;
    /// Earliest and latest sample timestamps across all domains.
    std::int64_t span_begin_ns() const;
    std::int64_t span_end_ns() const;

    /// Appends a sample, checking the per-domain ordering and range
    /// invariants. Creates the domain series on first sight.
    void append(const DomainCounter& sample);
};

/// Energy integrated over a window of the run, split by domain kind.
struct EnergyWindow {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
};

/// Wraparound-corrected counter difference: (curr - prev) mod max_range.
/// Assumes at most one wrap between the two readings.
std::uint64_t counter_delta(std::uint64_t prev_uj, std::uint64_t curr_uj, std::uint64_t max_range_uj);

/// Integrates the trace over [start, end], linearly interpolating the
/// cumulative energy at the window boundaries. Package domains accumulate
/// into cpu_energy_j, dram domains into dram_energy_j. The window must
/// overlap the trace span with positive length; the portion outside the
/// span contributes nothing.
EnergyWindow integrate_window(const EnergyTrace& trace, std::int64_t start_ns, std::int64_t end_ns);

}  // namespace atlas
