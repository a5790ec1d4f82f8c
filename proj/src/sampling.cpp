#include "atlas/sampling.hpp"

#include <chrono>

#include "atlas/errors.hpp"

namespace atlas {

SamplingSession::SamplingSession(EnergySource& source, std::int64_t interval_ns)
    : source_(source), interval_ns_(interval_ns) {
    trace_.sampling_interval_ns = interval_ns;
    start_ns_ = source_.clock().now_ns();
    if (source_.virtual_time()) return;
    // First sample lands synchronously so every later instant of the run
    // is covered by the trace span.
    for (const auto& counter : source_.read()) trace_.append(counter);
    producer_ = std::thread([this] { producer_loop(); });
}

SamplingSession::~SamplingSession() {
    if (!stopped_) {
        try {
            finish();
        } catch (...) {
        }
    }
}

void SamplingSession::producer_loop() {
    auto next = std::chrono::steady_clock::now() + std::chrono::nanoseconds(interval_ns_);
    while (true) {
        {
            std::unique_lock<std::mutex> lock(mutex_);
            if (wakeup_.wait_until(lock, next, [this] { return stop_requested_; })) return;
        }
        try {
            for (const auto& counter : source_.read()) trace_.append(counter);
        } catch (const std::exception& e) {
            failure_message_ = e.what();
            failed_.store(true);
            return;
        }
        next += std::chrono::nanoseconds(interval_ns_);
    }
}

EnergyTrace SamplingSession::finish() {
    stopped_ = true;
    std::int64_t end_ns = source_.clock().now_ns();
    if (source_.virtual_time()) {
        for (std::int64_t t = start_ns_; t <= end_ns; t += interval_ns_) {
            for (const auto& counter : source_.read_at(t)) trace_.append(counter);
        }
        // Close the trace at the stop instant unless a tick already did.
        if ((end_ns - start_ns_) % interval_ns_ != 0) {
            for (const auto& counter : source_.read_at(end_ns)) trace_.append(counter);
        }
    } else {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stop_requested_ = true;
        }
        wakeup_.notify_all();
        if (producer_.joinable()) producer_.join();
        if (!failed_.load()) {
            try {
                auto finals = source_.read();
                bool fresh = trace_.empty() ||
                             (!finals.empty() && finals.front().timestamp_ns > trace_.span_end_ns());
                if (fresh) {
                    for (const auto& counter : finals) trace_.append(counter);
                }
            } catch (const std::exception& e) {
                failure_message_ = e.what();
                failed_.store(true);
            }
        }
    }
    source_.end_sampling();
    return std::move(trace_);
}

std::unique_ptr<SamplingSession> start_sampling(EnergySource& source, std::int64_t interval_ns) {
    if (interval_ns < kMinSamplingIntervalNs) {
        throw std::invalid_argument("sampling interval must be >= 1 ms, got " +
                                    std::to_string(interval_ns) + " ns");
    }
    if (!source.try_begin_sampling()) {
        throw AlreadySampling("a sampling session is already active on this source");
    }
    try {
        return std::unique_ptr<SamplingSession>(new SamplingSession(source, interval_ns));
    } catch (...) {
        source.end_sampling();
        throw;
    }
}

EnergyTrace stop_sampling(SamplingSession& session) { return session.finish(); }

}  // namespace atlas
