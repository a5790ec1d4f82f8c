#pragma once

#include <chrono>
#include <cstdint>
#include <thread>

namespace atlas {

/// Monotonic time source used by sources, samplers and connectors.
///
/// Two implementations exist: SteadyClock wraps std::chrono::steady_clock,
/// VirtualClock is a settable counter advanced explicitly. Replay sources
/// carry a VirtualClock so that a whole measurement run is deterministic.
class Clock {
public:
    virtual ~Clock() = default;

    virtual std::int64_t now_ns() = 0;

    /// Blocks for `ns` on a real clock; advances time instantly on a
    /// virtual one.
    virtual void sleep_for(std::int64_t ns) = 0;
};

class SteadyClock final : public Clock {
public:
    std::int64_t now_ns() override {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }

    void sleep_for(std::int64_t ns) override {
        if (ns > 0) std::this_thread::sleep_for(std::chrono::nanoseconds(ns));
    }
};

class VirtualClock final : public Clock {
public:
    explicit VirtualClock(std::int64_t start_ns = 0) : now_(start_ns) {}

    std::int64_t now_ns() override { return now_; }

    void sleep_for(std::int64_t ns) override {
        if (ns > 0) now_ += ns;
    }

    void set_ns(std::int64_t t) { now_ = t; }

private:
    std::int64_t now_;
};

}  // namespace atlas
