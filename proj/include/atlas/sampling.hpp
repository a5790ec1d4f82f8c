#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "atlas/energy.hpp"
#include "atlas/energy_source.hpp"

namespace atlas {

inline constexpr std::int64_t kMinSamplingIntervalNs = 1'000'000;  // 1 ms

/// A running sampling producer over one EnergySource. Create with
/// start_sampling(), harvest with stop_sampling(). On a real source a
/// background thread reads counters at the requested cadence; on a
/// virtual-time source the tick samples are materialized deterministically
/// at stop time. Either way the resulting trace ends with a sample taken
/// at the stop instant.
class SamplingSession {
public:
    ~SamplingSession();
    SamplingSession(const SamplingSession&) = delete;
    SamplingSession& operator=(const SamplingSession&) = delete;

    /// True when the producer hit a read error; the partial trace is still
    /// returned by stop_sampling and the caller decides how to react.
    bool failed() const { return failed_.load(); }
    const std::string& failure_message() const { return failure_message_; }

private:
    friend std::unique_ptr<SamplingSession> start_sampling(EnergySource&, std::int64_t);
    friend EnergyTrace stop_sampling(SamplingSession&);

    SamplingSession(EnergySource& source, std::int64_t interval_ns);
    void producer_loop();
    EnergyTrace finish();

    EnergySource& source_;
    std::int64_t interval_ns_;
    std::int64_t start_ns_ = 0;
    EnergyTrace trace_;
    std::thread producer_;
    std::mutex mutex_;
    std::condition_variable wakeup_;
    bool stop_requested_ = false;
    bool stopped_ = false;
    std::atomic<bool> failed_{false};
    std::string failure_message_;
};

/// Begins sampling `source` every `interval_ns`. The interval must be at
/// least 1 ms so counter-read overhead stays negligible. Throws
/// AlreadySampling when a session is already active on the source.
std::unique_ptr<SamplingSession> start_sampling(EnergySource& source, std::int64_t interval_ns);

/// Halts the producer and returns the complete trace.
EnergyTrace stop_sampling(SamplingSession& session);

}  // namespace atlas
