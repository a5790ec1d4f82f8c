#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atlas/analysis.hpp"
#include "atlas/connector.hpp"
#include "atlas/energy_source.hpp"

namespace atlas {

struct PlanQuery {
    std::string query_id;
    std::string sql_path;
};

struct WorkloadPlan {
    std::vector<PlanQuery> queries;
    int repetitions = 1;
    int warmup_runs = 0;
    bool randomize_order = false;
    std::uint64_t seed = 0;
    std::int64_t sampling_interval_ns = 100'000'000;  // 100 ms

    void validate() const;
};

/// Loads a plan JSON document; relative sql paths resolve against the plan
/// file's directory.
WorkloadPlan load_workload_plan(const std::string& path);

struct QueryRunResult {
    std::string query_id;
    int repetition_index = 0;
    double wall_time_s = 0.0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
    std::int64_t started_at_unix_ns = 0;
    std::optional<std::int64_t> row_count;
};

struct QueryErrorRecord {
    std::string query_id;
    int repetition_index = 0;  // -1 for a warmup execution
    std::string message;
};

struct RunTotals {
    double wall_s = 0.0;
    double cpu_energy_j = 0.0;
    double dram_energy_j = 0.0;
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
};

struct IdleBaseline {
    double seconds = 0.0;
    double cpu_w = 0.0;
    double dram_w = 0.0;
};

struct WorkloadResult {
    WorkloadPlan plan;
    std::string connector_name;
    std::vector<QueryRunResult> results;
    std::vector<QueryErrorRecord> errors;
    RunTotals totals;
    std::int64_t run_started_at_unix_ns = 0;
    std::uint64_t seed_used = 0;
    std::optional<IdleBaseline> idle_baseline;

    bool partial() const { return !errors.empty(); }
};

struct WorkloadOptions {
    /// Maps the monotonic run timeline onto UTC. Defaults to the wall
    /// clock at run start for real sources, and to the trace's own
    /// timestamps (interpreted as Unix nanoseconds) for replay sources.
    std::optional<std::int64_t> utc_anchor_ns;
    /// When set, measures this many seconds of idle power first and
    /// subtracts idle x wall_time from every query's energy. The baseline
    /// is recorded in the result so reports can label it.
    std::optional<double> idle_baseline_s;
};

/// Health check; returns nullopt when the connector responds in time,
/// otherwise the failure description.
std::optional<std::string> probe(Connector& connector, Clock& clock);

struct QueryTiming {
    double wall_time_s = 0.0;
    std::optional<std::int64_t> row_count;
    ExecutionResult execution;
};

/// Blocking single-query execution timed on the harness clock.
QueryTiming execute_query(Connector& connector, const QueryRequest& request, Clock& clock);

/// Runs the full plan: probes the connector, samples energy continuously,
/// executes every (query, repetition) with I/O and timing capture, and
/// integrates per-query energy windows. A connector failure ends the run
/// early and is recorded; the partial result is still returned. A sampler
/// failure aborts with SamplingLost.
WorkloadResult run_workload(const WorkloadPlan& plan, Connector& connector, EnergySource& source,
                            const WorkloadOptions& options = {});

/// Mean per-execution measurements over the measured results.
PerQueryAggregate aggregate_per_query(const std::vector<QueryRunResult>& results);

}  // namespace atlas
