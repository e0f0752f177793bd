#include "tclf/timeutil.hpp"

#include <cstdio>

#include "tclf/errors.hpp"

namespace tclf {
namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

bool read_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

UnixTime parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, da = 0, hh = 0, mi = 0, ss = 0;
    const auto fail = [&] {
        throw InvalidInput("unparseable timestamp '" + text + "' (expected ISO-8601)");
    };
    if (!read_int(text, 0, 4, y)) fail();
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') fail();
    if (!read_int(text, 5, 2, mo) || !read_int(text, 8, 2, da)) fail();
    if (mo < 1 || mo > 12 || da < 1 || da > 31) fail();
    if (text.size() > 10) {
        if (text[10] != 'T' && text[10] != ' ') fail();
        if (!read_int(text, 11, 2, hh)) fail();
        if (text.size() < 16 || text[13] != ':' || !read_int(text, 14, 2, mi)) fail();
        std::size_t pos = 16;
        if (pos < text.size() && text[pos] == ':') {
            if (!read_int(text, pos + 1, 2, ss)) fail();
            pos += 3;
        }
        if (pos < text.size()) {
            if (text.substr(pos) != "Z") fail();
        }
        if (hh > 23 || mi > 59 || ss > 60) fail();
    }
    return days_from_civil(y, mo, da) * 86400 + hh * 3600 + mi * 60 + ss;
}

std::string format_iso8601(UnixTime t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned mo, da;
    civil_from_days(days, y, mo, da);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", y, mo, da,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

std::string format_iso_date(UnixTime t) {
    return format_iso8601(t).substr(0, 10);
}

std::int64_t days_since_epoch(UnixTime t) {
    std::int64_t days = t / 86400;
    if (t % 86400 < 0) days -= 1;
    return days;
}

}  // namespace tclf
