#include "atlas/proc_io.hpp"

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

std::int64_t mono_now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

IoCounters snapshot_io(int pid, const std::string& proc_root) {
    std::string path = proc_root + "/" + std::to_string(pid) + "/io";
    FILE* f = std::fopen(path.c_str(), "r");
    if (f == nullptr) {
        if (errno == EACCES || errno == EPERM)
            throw AccessDenied("cannot read " + path + ": " + std::strerror(errno));
        throw ProcessNotFound("process " + std::to_string(pid) + " not inspectable (" + path + ")");
    }
    IoCounters counters;
    counters.timestamp_ns = mono_now_ns();
    char line[256];
    bool saw_read = false, saw_write = false;
    while (std::fgets(line, sizeof line, f) != nullptr) {
        unsigned long long value = 0;
        if (std::sscanf(line, "read_bytes: %llu", &value) == 1) {
            counters.read_bytes = value;
            saw_read = true;
        } else if (std::sscanf(line, "write_bytes: %llu", &value) == 1) {
            counters.write_bytes = value;
            saw_write = true;
        }
    }
    std::fclose(f);
    if (!saw_read || !saw_write) {
        throw ProcessNotFound(path + " lacks read_bytes/write_bytes fields");
    }
    return counters;
}

IoCounters snapshot_io_sum(const std::vector<int>& pids, const std::string& proc_root) {
    IoCounters sum;
    sum.timestamp_ns = mono_now_ns();
    for (int pid : pids) {
        try {
            IoCounters c = snapshot_io(pid, proc_root);
            sum.read_bytes += c.read_bytes;
            sum.write_bytes += c.write_bytes;
        } catch (const ProcessNotFound&) {
            // A monitored worker may exit between queries; its final I/O is
            // attributed to the run totals only while it was alive.
        }
    }
    return sum;
}

IoDelta io_delta(const IoCounters& before, const IoCounters& after) {
    if (after.timestamp_ns < before.timestamp_ns) {
        throw std::invalid_argument("io_delta snapshots out of order");
    }
    if (after.read_bytes < before.read_bytes || after.write_bytes < before.write_bytes) {
        throw CounterRegression("io counters moved backwards (pid reuse?)");
    }
    return IoDelta{after.read_bytes - before.read_bytes, after.write_bytes - before.write_bytes};
}

}  // namespace atlas
