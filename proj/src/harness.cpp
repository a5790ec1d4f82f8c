#include "atlas/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "atlas/errors.hpp"
#include "atlas/sampling.hpp"
#include "atlas/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace atlas {

void WorkloadPlan::validate() const {
    if (queries.empty()) throw ConfigError("workload plan has no queries");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (warmup_runs < 0) throw ConfigError("warmup_runs must be >= 0");
    if (sampling_interval_ns < kMinSamplingIntervalNs) {
        throw ConfigError("sampling_interval_ns must be >= 1 ms");
    }
    std::set<std::string> ids;
    for (const auto& q : queries) {
        if (q.query_id.empty()) throw ConfigError("query_id must not be empty");
        if (!ids.insert(q.query_id).second) {
            throw ConfigError("duplicate query_id '" + q.query_id + "'");
        }
    }
}

WorkloadPlan load_workload_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open workload plan: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    WorkloadPlan plan;
    if (!doc.contains("queries") || !doc["queries"].is_array()) {
        throw ConfigError(path + ": missing 'queries' array");
    }
    fs::path base = fs::path(path).parent_path();
    for (const auto& entry : doc["queries"]) {
        if (!entry.contains("query_id") || !entry.contains("sql_path")) {
            throw ConfigError(path + ": each query needs query_id and sql_path");
        }
        PlanQuery q;
        q.query_id = entry["query_id"].get<std::string>();
        fs::path sql = entry["sql_path"].get<std::string>();
        q.sql_path = sql.is_absolute() ? sql.string() : (base / sql).string();
        plan.queries.push_back(std::move(q));
    }
    plan.repetitions = doc.value("repetitions", 1);
    plan.warmup_runs = doc.value("warmup_runs", 0);
    plan.randomize_order = doc.value("randomize_order", false);
    plan.seed = doc.value("seed", std::uint64_t{0});
    plan.sampling_interval_ns = doc.value("sampling_interval_ns", std::int64_t{100'000'000});
    plan.validate();
    return plan;
}

std::optional<std::string> probe(Connector& connector, Clock& clock) {
    try {
        connector.probe(clock);
        return std::nullopt;
    } catch (const ConnectorUnhealthy& e) {
        return std::string(e.what());
    }
}

QueryTiming execute_query(Connector& connector, const QueryRequest& request, Clock& clock) {
    QueryTiming timing;
    std::int64_t start = clock.now_ns();
    timing.execution = connector.execute(request, clock);
    std::int64_t end = clock.now_ns();
    timing.wall_time_s = seconds_from_ns(end - start);
    timing.row_count = timing.execution.row_count;
    return timing;
}

namespace {

std::string read_sql_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read SQL file: " + path);
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
}

std::int64_t wall_clock_unix_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Interim record while energy integration waits for the trace.
struct PendingResult {
    QueryRunResult result;
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
};

IdleBaseline measure_idle(EnergySource& source, std::int64_t interval_ns, double seconds) {
    auto session = start_sampling(source, interval_ns);
    Clock& clock = source.clock();
    std::int64_t start = clock.now_ns();
    clock.sleep_for(static_cast<std::int64_t>(seconds * kNsPerSecond));
    std::int64_t end = clock.now_ns();
    EnergyTrace trace = stop_sampling(*session);
    if (session->failed()) throw SamplingLost("idle baseline: " + session->failure_message());
    EnergyWindow window = integrate_window(trace, start, end);
    IdleBaseline baseline;
    baseline.seconds = seconds;
    baseline.cpu_w = window.cpu_energy_j / seconds;
    baseline.dram_w = window.dram_energy_j / seconds;
    return baseline;
}

}  // namespace

WorkloadResult run_workload(const WorkloadPlan& plan, Connector& connector, EnergySource& source,
                            const WorkloadOptions& options) {
    plan.validate();

    // All referenced SQL must load before anything runs.
    std::vector<std::string> sql_texts;
    sql_texts.reserve(plan.queries.size());
    for (const auto& q : plan.queries) sql_texts.push_back(read_sql_file(q.sql_path));

    Clock& clock = source.clock();
    connector.probe(clock);

    WorkloadResult run;
    run.plan = plan;
    run.connector_name = connector.name();
    run.seed_used = plan.seed;

    if (options.idle_baseline_s && *options.idle_baseline_s > 0) {
        run.idle_baseline = measure_idle(source, plan.sampling_interval_ns, *options.idle_baseline_s);
    }

    std::vector<std::size_t> order(plan.queries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (plan.randomize_order) {
        std::mt19937_64 rng(plan.seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    auto session = start_sampling(source, plan.sampling_interval_ns);
    std::int64_t run_start = clock.now_ns();
    std::int64_t utc_anchor = options.utc_anchor_ns
                                  ? *options.utc_anchor_ns
                                  : (source.virtual_time() ? run_start : wall_clock_unix_ns());
    auto to_utc_ns = [&](std::int64_t mono_ns) { return utc_anchor + (mono_ns - run_start); };
    run.run_started_at_unix_ns = to_utc_ns(run_start);

    const std::vector<int> pids = connector.io_pids();
    IoCounters run_io_before;
    if (!pids.empty()) run_io_before = snapshot_io_sum(pids);
    std::uint64_t synthetic_read = 0, synthetic_write = 0;

    std::vector<PendingResult> pending;
    bool aborted = false;
    for (std::size_t idx : order) {
        const PlanQuery& query = plan.queries[idx];
        QueryRequest request{query.query_id, sql_texts[idx], query.sql_path};
        for (int rep = 0; rep < plan.warmup_runs + plan.repetitions && !aborted; ++rep) {
            const bool measured = rep >= plan.warmup_runs;
            const int rep_index = measured ? rep - plan.warmup_runs : -1;
            IoCounters io_before;
            if (!pids.empty()) io_before = snapshot_io_sum(pids);
            std::int64_t q_start = clock.now_ns();
            ExecutionResult execution;
            try {
                execution = connector.execute(request, clock);
            } catch (const QueryFailed& e) {
                run.errors.push_back(QueryErrorRecord{query.query_id, rep_index, e.what()});
                aborted = true;
                break;
            }
            std::int64_t q_end = clock.now_ns();

            IoDelta io;
            if (execution.io) {
                io = *execution.io;
                synthetic_read += io.read_bytes;
                synthetic_write += io.write_bytes;
            } else if (!pids.empty()) {
                io = io_delta(io_before, snapshot_io_sum(pids));
            }

            if (!measured) continue;
            PendingResult p;
            p.result.query_id = query.query_id;
            p.result.repetition_index = rep_index;
            p.result.wall_time_s = seconds_from_ns(q_end - q_start);
            p.result.read_bytes = io.read_bytes;
            p.result.write_bytes = io.write_bytes;
            p.result.started_at_unix_ns = to_utc_ns(q_start);
            p.result.row_count = execution.row_count;
            p.start_ns = q_start;
            p.end_ns = q_end;
            pending.push_back(std::move(p));
        }
        if (aborted) break;
    }

    std::int64_t run_end = clock.now_ns();
    EnergyTrace trace = stop_sampling(*session);
    if (session->failed()) {
        throw SamplingLost("energy sampling failed mid-run: " + session->failure_message());
    }

    for (auto& p : pending) {
        EnergyWindow window = integrate_window(trace, p.start_ns, p.end_ns);
        p.result.cpu_energy_j = window.cpu_energy_j;
        p.result.dram_energy_j = window.dram_energy_j;
        if (run.idle_baseline) {
            p.result.cpu_energy_j =
                std::max(0.0, p.result.cpu_energy_j - run.idle_baseline->cpu_w * p.result.wall_time_s);
            p.result.dram_energy_j = std::max(
                0.0, p.result.dram_energy_j - run.idle_baseline->dram_w * p.result.wall_time_s);
        }
        run.results.push_back(std::move(p.result));
    }

    run.totals.wall_s = seconds_from_ns(run_end - run_start);
    if (run_end > run_start) {
        EnergyWindow whole = integrate_window(trace, run_start, run_end);
        run.totals.cpu_energy_j = whole.cpu_energy_j;
        run.totals.dram_energy_j = whole.dram_energy_j;
        if (run.idle_baseline) {
            run.totals.cpu_energy_j =
                std::max(0.0, run.totals.cpu_energy_j - run.idle_baseline->cpu_w * run.totals.wall_s);
            run.totals.dram_energy_j = std::max(
                0.0, run.totals.dram_energy_j - run.idle_baseline->dram_w * run.totals.wall_s);
        }
    }
    if (!pids.empty()) {
        IoDelta whole = io_delta(run_io_before, snapshot_io_sum(pids));
        run.totals.read_bytes = whole.read_bytes;
        run.totals.write_bytes = whole.write_bytes;
    } else {
        run.totals.read_bytes = synthetic_read;
        run.totals.write_bytes = synthetic_write;
    }
    return run;
}

PerQueryAggregate aggregate_per_query(const std::vector<QueryRunResult>& results) {
    PerQueryAggregate aggregate;
    if (results.empty()) return aggregate;
    for (const auto& r : results) {
        aggregate.wall_s += r.wall_time_s;
        aggregate.cpu_energy_j += r.cpu_energy_j;
        aggregate.dram_energy_j += r.dram_energy_j;
        aggregate.read_bytes += static_cast<double>(r.read_bytes);
        aggregate.write_bytes += static_cast<double>(r.write_bytes);
    }
    double n = static_cast<double>(results.size());
    aggregate.wall_s /= n;
    aggregate.cpu_energy_j /= n;
    aggregate.dram_energy_j /= n;
    aggregate.read_bytes /= n;
    aggregate.write_bytes /= n;
    return aggregate;
}

}  // namespace atlas
