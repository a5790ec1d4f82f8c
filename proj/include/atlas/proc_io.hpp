#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace atlas {

/// Cumulative block-layer I/O counters for one process, as reported by
/// /proc/<pid>/io.
struct IoCounters {
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
    std::int64_t timestamp_ns = 0;
};

struct IoDelta {
    std::uint64_t read_bytes = 0;
    std::uint64_t write_bytes = 0;
};

/// Reads the current counters for one process. `proc_root` exists so tests
/// can point at a fake tree; the default is the live kernel interface.
/// Throws ProcessNotFound when the pid is gone and AccessDenied when the
/// io file is not inspectable.
IoCounters snapshot_io(int pid, const std::string& proc_root = "/proc");

/// Sums snapshots over a set of processes; pids that vanished between
/// enumeration and read are skipped.
IoCounters snapshot_io_sum(const std::vector<int>& pids, const std::string& proc_root = "/proc");

/// Component-wise counter difference. Throws CounterRegression when a
/// counter moved backwards (pid reuse) and std::invalid_argument when the
/// snapshots are out of order.
IoDelta io_delta(const IoCounters& before, const IoCounters& after);

}  // namespace atlas
