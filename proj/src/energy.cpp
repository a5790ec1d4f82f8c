#include "atlas/energy.hpp"

#include <algorithm>
#include <limits>

#include "atlas/errors.hpp"
#include "atlas/units.hpp"

namespace atlas {

std::string to_string(DomainKind kind) {
    return kind == DomainKind::package ? "package" : "dram";
}

bool EnergyTrace::empty() const {
    for (const auto& d : domains)
        if (!d.timestamps_ns.empty()) return false;
    return true;
}

std::int64_t EnergyTrace::span_begin_ns() const {
    std::int64_t begin = std::numeric_limits<std::int64_t>::max();
    for (const auto& d : domains)
        if (!d.timestamps_ns.empty()) begin = std::min(begin, d.timestamps_ns.front());
    return begin;
}

std::int64_t EnergyTrace::span_end_ns() const {
    std::int64_t end = std::numeric_limits<std::int64_t>::min();
    for (const auto& d : domains)
        if (!d.timestamps_ns.empty()) end = std::max(end, d.timestamps_ns.back());
    return end;
}

void EnergyTrace::append(const DomainCounter& sample) {
    if (sample.max_range_uj == 0 || sample.cumulative_uj >= sample.max_range_uj) {
        throw InvalidCounter("counter sample outside [0, max_range) for domain " +
                             to_string(sample.kind) + "-" + std::to_string(sample.domain_id));
    }
    DomainSeries* series = nullptr;
    for (auto& d : domains) {
        if (d.kind == sample.kind && d.domain_id == sample.domain_id) {
            series = &d;
            break;
        }
    }
    if (series == nullptr) {
        domains.push_back(DomainSeries{sample.kind, sample.domain_id, sample.max_range_uj, {}, {}});
        series = &domains.back();
    }
    if (series->max_range_uj != sample.max_range_uj) {
        throw TraceFormatError("max_range_uj changed within domain " + to_string(sample.kind) +
                               "-" + std::to_string(sample.domain_id));
    }
    if (!series->timestamps_ns.empty() && sample.timestamp_ns <= series->timestamps_ns.back()) {
        throw TraceFormatError("non-increasing timestamp within domain " + to_string(sample.kind) +
                               "-" + std::to_string(sample.domain_id));
    }
    series->timestamps_ns.push_back(sample.timestamp_ns);
    series->cumulative_uj.push_back(sample.cumulative_uj);
}

std::uint64_t counter_delta(std::uint64_t prev_uj, std::uint64_t curr_uj, std::uint64_t max_range_uj) {
    if (max_range_uj == 0 || prev_uj >= max_range_uj || curr_uj >= max_range_uj) {
        throw InvalidCounter("counter values must lie in [0, max_range)");
    }
    if (curr_uj >= prev_uj) return curr_uj - prev_uj;
    return max_range_uj - prev_uj + curr_uj;
}

namespace {

// Unwrapped cumulative microjoules relative to the first sample, evaluated
// at time t by linear interpolation. t must lie within the series span.
double unwrapped_at(const DomainSeries& s, const std::vector<double>& unwrapped, std::int64_t t) {
    const auto& ts = s.timestamps_ns;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return unwrapped.front();
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    if (hi == ts.size()) return unwrapped.back();
    std::size_t lo = hi - 1;
    double frac = static_cast<double>(t - ts[lo]) / static_cast<double>(ts[hi] - ts[lo]);
    return unwrapped[lo] + frac * (unwrapped[hi] - unwrapped[lo]);
}

}  // namespace

EnergyWindow integrate_window(const EnergyTrace& trace, std::int64_t start_ns, std::int64_t end_ns) {
    if (trace.empty()) throw WindowOutOfRange("trace is empty");
    if (start_ns >= end_ns) throw std::invalid_argument("window start must precede end");
    std::int64_t span_begin = trace.span_begin_ns();
    std::int64_t span_end = trace.span_end_ns();
    if (std::max(start_ns, span_begin) >= std::min(end_ns, span_end)) {
        throw WindowOutOfRange("window [" + std::to_string(start_ns) + ", " + std::to_string(end_ns) +
                               ") does not overlap trace span [" + std::to_string(span_begin) + ", " +
                               std::to_string(span_end) + "]");
    }

    EnergyWindow window;
    window.start_ns = start_ns;
    window.end_ns = end_ns;
    for (const auto& d : trace.domains) {
        if (d.size() < 2) continue;
        std::int64_t a = std::max(start_ns, d.timestamps_ns.front());
        std::int64_t b = std::min(end_ns, d.timestamps_ns.back());
        if (a >= b) continue;
        std::vector<double> unwrapped(d.size());
        unwrapped[0] = 0.0;
        for (std::size_t i = 1; i < d.size(); ++i) {
            unwrapped[i] = unwrapped[i - 1] +
                           static_cast<double>(counter_delta(d.cumulative_uj[i - 1], d.cumulative_uj[i],
                                                             d.max_range_uj));
        }
        double energy_uj = unwrapped_at(d, unwrapped, b) - unwrapped_at(d, unwrapped, a);
        double energy_j = energy_uj / kMicrojoulesPerJoule;
        if (d.kind == DomainKind::package)
            window.cpu_energy_j += energy_j;
        else
            window.dram_energy_j += energy_j;
    }
    return window;
}

}  // namespace atlas
