#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "atlas/clock.hpp"
#include "atlas/energy.hpp"

namespace atlas {

struct DomainInfo {
    DomainKind kind = DomainKind::package;
    int domain_id = 0;
    std::uint64_t max_range_uj = 0;
};

struct SourceConfig {
    enum class Backend { rapl, replay };
    Backend backend = Backend::rapl;
    /// Replay trace path, or an explicit powercap root for the rapl backend.
    std::string path;

    /// Parses a source spec string: `rapl`, `rapl:<sysfs-root>` or
    /// `replay:<trace.csv>`.
    static SourceConfig parse(const std::string& spec);
};

/// A handle over an enumerated set of energy counter domains. Obtain one
/// with open_energy_source(); read all domains atomically with read().
class EnergySource {
public:
    virtual ~EnergySource() = default;

    virtual const std::vector<DomainInfo>& domains() const = 0;

    /// One counter per enumerated domain, all stamped from a single clock
    /// read.
    virtual std::vector<DomainCounter> read() = 0;

    /// The clock that timestamps samples from this source. Real for rapl,
    /// virtual (trace-driven) for replay.
    virtual Clock& clock() = 0;

    /// True when time is virtual and reads are reproducible.
    virtual bool virtual_time() const { return false; }

    /// Counters at an explicit instant; only meaningful for virtual-time
    /// sources.
    virtual std::vector<DomainCounter> read_at(std::int64_t timestamp_ns);

    /// At most one sampling session may run per source.
    bool try_begin_sampling() { return !sampling_active_.exchange(true); }
    void end_sampling() { sampling_active_.store(false); }

private:
    std::atomic<bool> sampling_active_{false};
};

/// Opens a rapl or replay source per the config. Throws SourceUnavailable
/// when the backing files are missing or unreadable and TraceFormatError
/// for malformed replay traces. The ATLAS_POWERCAP_ROOT environment
/// variable overrides the rapl sysfs root.
std::unique_ptr<EnergySource> open_energy_source(const SourceConfig& config);

/// Convenience wrapper matching the source contract by name.
inline std::vector<DomainCounter> read_counters(EnergySource& source) { return source.read(); }

/// Loads a replay trace CSV (`timestamp_ns,domain,cumulative_uj,max_range_uj`)
/// into an EnergyTrace. Exposed for tests and trace tooling.
EnergyTrace load_replay_trace(const std::string& path);

}  // namespace atlas
