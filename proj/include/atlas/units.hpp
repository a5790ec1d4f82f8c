#pragma once

#include <cstdint>
#include <string>

namespace atlas {

// Single conversion constants, applied once at model entry. Everything
// upstream of the footprint models is joules and nanoseconds.
inline constexpr double kJoulesPerKwh = 3.6e6;
inline constexpr double kMicrojoulesPerJoule = 1e6;
inline constexpr double kNsPerSecond = 1e9;
inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kDaysPerYear = 365.25;
inline constexpr double kSecondsPerYear = kSecondsPerDay * kDaysPerYear;

inline double joules_from_uj(std::uint64_t uj) { return static_cast<double>(uj) / kMicrojoulesPerJoule; }
inline double kwh_from_joules(double j) { return j / kJoulesPerKwh; }
inline double mwh_from_joules(double j) { return j / (kJoulesPerKwh * 1e3); }
inline double seconds_from_ns(std::int64_t ns) { return static_cast<double>(ns) / kNsPerSecond; }

/// Parses an ISO-8601 UTC instant of the form `2022-08-01T00:00:00Z`.
/// Returns seconds since the Unix epoch. Throws atlas::FormatError.
std::int64_t parse_iso8601_utc(const std::string& text);

/// Formats seconds since the Unix epoch as `YYYY-MM-DDThh:mm:ssZ`.
std::string format_iso8601_utc(std::int64_t unix_seconds);

}  // namespace atlas
