#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "atlas/clock.hpp"
#include "atlas/proc_io.hpp"

namespace atlas {

struct QueryRequest {
    std::string query_id;
    std::string sql_text;
    std::string sql_file;  // empty for ad-hoc text (health checks)
};

struct ExecutionResult {
    std::optional<std::int64_t> row_count;
    /// Present when the connector itself accounts the I/O of the
    /// execution (stub: synthetic, exec: the child's counters). Absent
    /// means the harness snapshots io_pids() around the call.
    std::optional<IoDelta> io;
};

/// Executes queries against one database system. Implementations must be
/// usable with either a real or a virtual clock.
class Connector {
public:
    virtual ~Connector() = default;

    virtual std::string name() const = 0;

    /// Runs the trivial health query under a timeout. Throws
    /// ConnectorUnhealthy.
    virtual void probe(Clock& clock) = 0;

    /// Blocking execution. Throws QueryFailed with captured diagnostics.
    virtual ExecutionResult execute(const QueryRequest& request, Clock& clock) = 0;

    /// Processes whose /proc io the harness snapshots around executions.
    virtual std::vector<int> io_pids() const { return {}; }
};

/// Deterministic test double. Behavior is fixed per query id: a virtual
/// (or real, depending on the clock) execution duration, synthetic I/O and
/// row counts, or a forced failure.
struct StubBehavior {
    double duration_s = 0.001;
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
    std::optional<std::int64_t> row_count;
    bool fail = false;
};

struct StubConnectorConfig {
    StubBehavior default_behavior;
    std::map<std::string, StubBehavior> per_query;
    double probe_duration_s = 0.0;
    double probe_timeout_s = 1.0;
};

class StubConnector final : public Connector {
public:
    explicit StubConnector(StubConnectorConfig config);

    std::string name() const override { return "stub"; }
    void probe(Clock& clock) override;
    ExecutionResult execute(const QueryRequest& request, Clock& clock) override;

private:
    const StubBehavior& behavior_for(const std::string& query_id) const;
    StubConnectorConfig config_;
};

/// Spawns one client process per query from an argv-style command
/// template; `{sql_file}` is replaced with the query file path. The
/// child's /proc io is read just before it is reaped, so its block-layer
/// writes are attributed to the query. A server pid file may name an
/// additional long-running process to monitor.
struct ExecConnectorConfig {
    std::string command_template;
    double probe_timeout_s = 10.0;
    std::string pid_file;  // optional
};

class ExecConnector final : public Connector {
public:
    explicit ExecConnector(ExecConnectorConfig config);

    std::string name() const override { return "exec"; }
    void probe(Clock& clock) override;
    ExecutionResult execute(const QueryRequest& request, Clock& clock) override;
    std::vector<int> io_pids() const override;

private:
    ExecConnectorConfig config_;
    std::vector<std::string> argv_template_;
};

/// Builds a connector from its JSON config form ({"kind": "stub"|"exec",
/// ...}). Throws ConfigError.
std::unique_ptr<Connector> make_connector(const nlohmann::json& spec);

}  // namespace atlas
