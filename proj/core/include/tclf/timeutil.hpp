#ifndef TCLF_TIMEUTIL_HPP
#define TCLF_TIMEUTIL_HPP

#include <cstdint>
#include <string>

namespace tclf {

// Seconds since the Unix epoch, UTC. Best-track timestamps are 3-hourly,
// so second precision is plenty.
using UnixTime = std::int64_t;

// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS][Z]" or the space-separated
// variant. Throws InvalidInput on anything else.
UnixTime parse_iso8601(const std::string& text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(UnixTime t);

// Formats the date part only, "YYYY-MM-DD".
std::string format_iso_date(UnixTime t);

// Days since the epoch (floor), for date-keyed lookups.
std::int64_t days_since_epoch(UnixTime t);

}  // namespace tclf

#endif
