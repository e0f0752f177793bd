#ifndef TCLF_INGEST_HPP
#define TCLF_INGEST_HPP

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tclf/timeutil.hpp"
#include "tclf/track.hpp"

namespace tclf {

// One raw best-track row as read from file, before gap filling and
// truncation.
struct RawRecord {
    std::string cyclone_id;
    UnixTime timestamp = 0;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
    double msws_kt = 0.0;
    double ecp_hpa = 0.0;
    std::optional<double> sst_c;
    bool landfall = false;
};

struct RowError {
    std::size_t line;
    std::string column;
    std::string message;
};

struct ParseResult {
    std::vector<RawRecord> records;  // sorted by (cyclone_id, timestamp)
    std::vector<RowError> errors;
    std::size_t duplicates_dropped = 0;
};

// Best-track file: UTF-8 CSV with a header row naming at least
// cyclone_id, timestamp, lat, lon, msws_kt, ecp_hpa; optional sst_c and
// landfall (0/1) columns. Unknown columns are ignored. Parsing is total:
// malformed rows land in the error report, never abort the read. A missing
// required column throws SchemaError.
ParseResult parse_best_track(std::istream& in);

void write_best_track_csv(std::ostream& out, const std::vector<RawRecord>& records);

// Gridded SST lookup keyed by day.
class SstGrid {
public:
    struct Cell {
        double lat_deg;
        double lon_deg;
        double sst_c;
    };

    // resolution_deg is the declared grid spacing; cells must align to it.
    explicit SstGrid(double resolution_deg = 1.0) : resolution_deg_(resolution_deg) {}

    void add(std::int64_t day, double lat_deg, double lon_deg, double sst_c);
    bool empty() const { return by_day_.empty(); }
    double resolution_deg() const { return resolution_deg_; }

    // Nearest cell on `day` by great-circle distance, falling back to the
    // nearest earlier day within max_days_back. Only cells within
    // max_arc_deg of central angle qualify.
    std::optional<double> lookup(std::int64_t day, double lat_deg, double lon_deg,
                                 double max_arc_deg = 5.0, int max_days_back = 31) const;

    // SST grid file: CSV columns date (ISO-8601 date), lat, lon, sst_c.
    static SstGrid read_csv(std::istream& in, double resolution_deg = 1.0);

private:
    double resolution_deg_;
    std::map<std::int64_t, std::vector<Cell>> by_day_;
};

// Fills missing sst fields from the grid; records already carrying sst are
// untouched and no other field is modified. Throws InvalidInput if the grid
// is empty or if any record cannot be resolved (message lists every
// affected record).
std::vector<RawRecord> attach_sst(std::vector<RawRecord> records, const SstGrid& grid);

enum class TruncationOutcome { kept, no_landfall, too_short };

struct TruncationResult {
    TruncationOutcome outcome;
    CycloneTrack track;  // valid iff outcome == kept
};

// Keeps records of one cyclone up to and including the first landfall-flagged
// record and converts them to a CycloneTrack (distance/direction left zero;
// see derive_motion). Cyclones with no flagged record are rejected; fewer
// than 2 retained records is a too-short error outcome.
// pre: records sorted by time, single cyclone, gap-free 3-hourly.
TruncationResult truncate_at_landfall(const std::vector<RawRecord>& records);

struct IngestSummary {
    std::size_t records_in = 0;
    std::size_t records_out = 0;
    std::size_t records_interpolated = 0;
    std::size_t cyclones_in = 0;
    std::size_t cyclones_kept = 0;
    std::size_t cyclones_rejected_no_landfall = 0;
    std::size_t cyclones_rejected_too_short = 0;
    std::size_t parse_errors = 0;
    std::size_t duplicates_dropped = 0;
    std::vector<std::string> messages;
};

// Full cleaning pipeline: parse -> attach_sst (when a grid is given) ->
// interpolate 3-hour gaps -> truncate at landfall -> derive motion features.
// Idempotent on its own output.
std::vector<CycloneTrack> ingest_tracks(std::istream& best_track,
                                        const SstGrid* grid,
                                        IngestSummary& summary);

// Serializes cleaned tracks back to the best-track schema (landfall flag on
// the final row of each cyclone), so the output feeds back into the pipeline.
void write_tracks_csv(std::ostream& out, const std::vector<CycloneTrack>& tracks);

}  // namespace tclf

#endif
