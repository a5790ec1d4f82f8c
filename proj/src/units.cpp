#include "atlas/units.hpp"

#include <cstdio>
#include <ctime>

#include "atlas/errors.hpp"

namespace atlas {

std::int64_t parse_iso8601_utc(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char z = 0;
    int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &z);
    if (n != 7 || z != 'Z') {
        throw FormatError("bad ISO-8601 UTC timestamp: '" + text + "' (expected YYYY-MM-DDThh:mm:ssZ)");
    }
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    time_t t = timegm(&tm);
    if (t == static_cast<time_t>(-1)) {
        throw FormatError("unrepresentable timestamp: '" + text + "'");
    }
    // timegm normalizes out-of-range fields; reject rather than silently shift.
    std::tm check{};
    gmtime_r(&t, &check);
    if (check.tm_year != y - 1900 || check.tm_mon != mo - 1 || check.tm_mday != d ||
        check.tm_hour != h || check.tm_min != mi || check.tm_sec != s) {
        throw FormatError("invalid calendar date in timestamp: '" + text + "'");
    }
    return static_cast<std::int64_t>(t);
}

std::string format_iso8601_utc(std::int64_t unix_seconds) {
    time_t t = static_cast<time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace atlas
