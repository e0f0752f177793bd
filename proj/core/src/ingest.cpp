#include "tclf/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "tclf/csv.hpp"
#include "tclf/errors.hpp"
#include "tclf/geo.hpp"
#include "tclf/preprocess.hpp"

namespace tclf {
namespace {

constexpr std::int64_t kStepSeconds = kRecordIntervalHours * 3600;

struct Columns {
    int cyclone_id = -1;
    int timestamp = -1;
    int lat = -1;
    int lon = -1;
    int msws = -1;
    int ecp = -1;
    int sst = -1;       // optional
    int landfall = -1;  // optional
};

Columns resolve_columns(const std::vector<std::string>& header) {
    Columns c;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& name = header[i];
        const int idx = static_cast<int>(i);
        if (name == "cyclone_id") c.cyclone_id = idx;
        else if (name == "timestamp") c.timestamp = idx;
        else if (name == "lat") c.lat = idx;
        else if (name == "lon") c.lon = idx;
        else if (name == "msws_kt") c.msws = idx;
        else if (name == "ecp_hpa") c.ecp = idx;
        else if (name == "sst_c") c.sst = idx;
        else if (name == "landfall") c.landfall = idx;
    }
    const auto require = [](int idx, const char* name) {
        if (idx < 0) throw SchemaError(std::string("best-track header is missing column '") + name + "'");
    };
    require(c.cyclone_id, "cyclone_id");
    require(c.timestamp, "timestamp");
    require(c.lat, "lat");
    require(c.lon, "lon");
    require(c.msws, "msws_kt");
    require(c.ecp, "ecp_hpa");
    return c;
}

bool same_values(const RawRecord& a, const RawRecord& b) {
    return a.lat_deg == b.lat_deg && a.lon_deg == b.lon_deg && a.msws_kt == b.msws_kt &&
           a.ecp_hpa == b.ecp_hpa && a.sst_c == b.sst_c && a.landfall == b.landfall;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

void write_record_row(std::ostream& out, const RawRecord& r) {
    out << r.cyclone_id << ',' << format_iso8601(r.timestamp) << ','
        << fmt("%.4f", r.lat_deg) << ',' << fmt("%.4f", r.lon_deg) << ','
        << fmt("%.3f", r.msws_kt) << ',' << fmt("%.3f", r.ecp_hpa) << ',';
    if (r.sst_c) out << fmt("%.3f", *r.sst_c);
    out << ',' << (r.landfall ? 1 : 0) << '\n';
}

}  // namespace

ParseResult parse_best_track(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw SchemaError("best-track file is empty (no header row)");
    const Columns cols = resolve_columns(fields);
    const std::size_t min_fields = static_cast<std::size_t>(
        std::max({cols.cyclone_id, cols.timestamp, cols.lat, cols.lon, cols.msws, cols.ecp})) + 1;

    ParseResult result;
    while (reader.next(fields)) {
        const std::size_t line = reader.line_number();
        if (fields.size() < min_fields) {
            result.errors.push_back({line, "", "expected at least " + std::to_string(min_fields) +
                                                   " fields, got " + std::to_string(fields.size())});
            continue;
        }
        RawRecord rec;
        rec.cyclone_id = fields[cols.cyclone_id];
        if (rec.cyclone_id.empty()) {
            result.errors.push_back({line, "cyclone_id", "empty cyclone_id"});
            continue;
        }
        try {
            rec.timestamp = parse_iso8601(fields[cols.timestamp]);
        } catch (const InvalidInput& e) {
            result.errors.push_back({line, "timestamp", e.what()});
            continue;
        }
        bool row_ok = true;
        const auto need_double = [&](int idx, const char* name, double& out_val) {
            const auto v = parse_double_field(fields[idx]);
            if (!v || !std::isfinite(*v)) {
                result.errors.push_back({line, name, "unparseable value '" + fields[idx] + "'"});
                row_ok = false;
                return;
            }
            out_val = *v;
        };
        need_double(cols.lat, "lat", rec.lat_deg);
        need_double(cols.lon, "lon", rec.lon_deg);
        need_double(cols.msws, "msws_kt", rec.msws_kt);
        need_double(cols.ecp, "ecp_hpa", rec.ecp_hpa);
        if (!row_ok) continue;

        if (rec.lat_deg < -90.0 || rec.lat_deg > 90.0) {
            result.errors.push_back({line, "lat", "latitude out of [-90, 90]"});
            continue;
        }
        if (rec.lon_deg < -360.0 || rec.lon_deg > 360.0) {
            result.errors.push_back({line, "lon", "longitude out of [-360, 360]"});
            continue;
        }
        rec.lon_deg = wrap_longitude_deg(rec.lon_deg);
        if (rec.msws_kt < 0.0) {
            result.errors.push_back({line, "msws_kt", "negative wind speed"});
            continue;
        }
        if (rec.ecp_hpa <= 800.0 || rec.ecp_hpa >= 1100.0) {
            result.errors.push_back({line, "ecp_hpa", "central pressure outside (800, 1100) hPa"});
            continue;
        }
        if (cols.sst >= 0 && static_cast<std::size_t>(cols.sst) < fields.size() &&
            !fields[cols.sst].empty()) {
            const auto v = parse_double_field(fields[cols.sst]);
            if (!v || !std::isfinite(*v)) {
                result.errors.push_back({line, "sst_c", "unparseable value '" + fields[cols.sst] + "'"});
                continue;
            }
            rec.sst_c = *v;
        }
        if (cols.landfall >= 0 && static_cast<std::size_t>(cols.landfall) < fields.size() &&
            !fields[cols.landfall].empty()) {
            const std::string& lf = fields[cols.landfall];
            if (lf == "1") rec.landfall = true;
            else if (lf == "0") rec.landfall = false;
            else {
                result.errors.push_back({line, "landfall", "expected 0 or 1, got '" + lf + "'"});
                continue;
            }
        }
        result.records.push_back(std::move(rec));
    }

    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const RawRecord& a, const RawRecord& b) {
                         if (a.cyclone_id != b.cyclone_id) return a.cyclone_id < b.cyclone_id;
                         return a.timestamp < b.timestamp;
                     });

    // Collapse duplicate (id, timestamp) rows; conflicting values are row
    // errors and the first occurrence wins.
    std::vector<RawRecord> unique;
    unique.reserve(result.records.size());
    for (auto& rec : result.records) {
        if (!unique.empty() && unique.back().cyclone_id == rec.cyclone_id &&
            unique.back().timestamp == rec.timestamp) {
            if (same_values(unique.back(), rec)) {
                ++result.duplicates_dropped;
            } else {
                result.errors.push_back(
                    {0, "", "conflicting duplicate for " + rec.cyclone_id + " at " +
                                format_iso8601(rec.timestamp) + "; keeping first occurrence"});
            }
            continue;
        }
        unique.push_back(std::move(rec));
    }
    result.records = std::move(unique);
    return result;
}

void write_best_track_csv(std::ostream& out, const std::vector<RawRecord>& records) {
    out << "cyclone_id,timestamp,lat,lon,msws_kt,ecp_hpa,sst_c,landfall\n";
    for (const auto& r : records) write_record_row(out, r);
}

void SstGrid::add(std::int64_t day, double lat_deg, double lon_deg, double sst_c) {
    const auto aligned = [&](double v) {
        const double q = v / resolution_deg_;
        return std::abs(q - std::round(q)) < 1e-9;
    };
    if (!aligned(lat_deg) || !aligned(lon_deg))
        throw InvalidInput("SstGrid: cell (" + std::to_string(lat_deg) + ", " +
                           std::to_string(lon_deg) + ") not aligned to " +
                           std::to_string(resolution_deg_) + " deg resolution");
    if (sst_c <= -5.0 || sst_c >= 40.0)
        throw InvalidInput("SstGrid: sst " + std::to_string(sst_c) + " outside (-5, 40) C");
    by_day_[day].push_back({lat_deg, lon_deg, sst_c});
}

std::optional<double> SstGrid::lookup(std::int64_t day, double lat_deg, double lon_deg,
                                      double max_arc_deg, int max_days_back) const {
    const double max_km = max_arc_deg * (M_PI / 180.0) * kEarthRadiusKm;
    const GeoPoint here{lat_deg, lon_deg};
    for (std::int64_t d = day; d >= day - max_days_back; --d) {
        const auto it = by_day_.find(d);
        if (it == by_day_.end()) continue;
        double best_km = max_km;
        std::optional<double> best;
        for (const Cell& cell : it->second) {
            const double km = haversine_km(here, {cell.lat_deg, cell.lon_deg});
            if (km <= best_km) {
                best_km = km;
                best = cell.sst_c;
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

SstGrid SstGrid::read_csv(std::istream& in, double resolution_deg) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw SchemaError("SST grid file is empty (no header row)");
    int date_col = -1, lat_col = -1, lon_col = -1, sst_col = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "date") date_col = static_cast<int>(i);
        else if (fields[i] == "lat") lat_col = static_cast<int>(i);
        else if (fields[i] == "lon") lon_col = static_cast<int>(i);
        else if (fields[i] == "sst_c") sst_col = static_cast<int>(i);
    }
    if (date_col < 0 || lat_col < 0 || lon_col < 0 || sst_col < 0)
        throw SchemaError("SST grid header must name date, lat, lon, sst_c");
    SstGrid grid(resolution_deg);
    while (reader.next(fields)) {
        const std::size_t line = reader.line_number();
        const auto fail = [&](const std::string& what) {
            throw SchemaError("SST grid line " + std::to_string(line) + ": " + what);
        };
        if (fields.size() <= static_cast<std::size_t>(std::max({date_col, lat_col, lon_col, sst_col})))
            fail("too few fields");
        const auto lat = parse_double_field(fields[lat_col]);
        const auto lon = parse_double_field(fields[lon_col]);
        const auto sst = parse_double_field(fields[sst_col]);
        if (!lat || !lon || !sst) fail("unparseable numeric field");
        grid.add(days_since_epoch(parse_iso8601(fields[date_col])), *lat, *lon, *sst);
    }
    return grid;
}

std::vector<RawRecord> attach_sst(std::vector<RawRecord> records, const SstGrid& grid) {
    if (grid.empty()) throw InvalidInput("attach_sst: SST grid is empty");
    std::vector<std::string> unresolved;
    for (auto& rec : records) {
        if (rec.sst_c) continue;
        const auto v = grid.lookup(days_since_epoch(rec.timestamp), rec.lat_deg, rec.lon_deg);
        if (v) rec.sst_c = *v;
        else unresolved.push_back(rec.cyclone_id + "@" + format_iso8601(rec.timestamp));
    }
    if (!unresolved.empty()) {
        std::ostringstream msg;
        msg << "attach_sst: no grid data within 5 deg and 31 days for " << unresolved.size()
            << " record(s):";
        for (const auto& u : unresolved) msg << ' ' << u;
        throw InvalidInput(msg.str());
    }
    return records;
}

TruncationResult truncate_at_landfall(const std::vector<RawRecord>& records) {
    std::size_t flag = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].landfall) {
            flag = i;
            break;
        }
    }
    if (flag == records.size()) return {TruncationOutcome::no_landfall, {}};
    if (flag + 1 < 2) return {TruncationOutcome::too_short, {}};

    CycloneTrack track;
    track.cyclone_id = records.front().cyclone_id;
    track.start_time = records.front().timestamp;
    track.points.reserve(flag + 1);
    for (std::size_t i = 0; i <= flag; ++i) {
        const RawRecord& r = records[i];
        if (!r.sst_c)
            throw InvalidInput("truncate_at_landfall: record " + r.cyclone_id + "@" +
                               format_iso8601(r.timestamp) +
                               " has no SST; attach an SST grid first");
        TrackPoint p;
        p.t_hours = static_cast<double>(r.timestamp - track.start_time) / 3600.0;
        p.msws_kt = r.msws_kt;
        p.ecp_hpa = r.ecp_hpa;
        p.sst_c = *r.sst_c;
        p.lat_deg = r.lat_deg;
        p.lon_deg = r.lon_deg;
        track.points.push_back(p);
    }
    return {TruncationOutcome::kept, std::move(track)};
}

std::vector<CycloneTrack> ingest_tracks(std::istream& best_track, const SstGrid* grid,
                                        IngestSummary& summary) {
    ParseResult parsed = parse_best_track(best_track);
    summary.records_in = parsed.records.size();
    summary.parse_errors = parsed.errors.size();
    summary.duplicates_dropped = parsed.duplicates_dropped;
    for (const auto& e : parsed.errors) {
        std::ostringstream msg;
        msg << "parse: line " << e.line;
        if (!e.column.empty()) msg << " column " << e.column;
        msg << ": " << e.message;
        summary.messages.push_back(msg.str());
    }

    if (grid) parsed.records = attach_sst(std::move(parsed.records), *grid);

    // Group per cyclone (records are sorted by id, time).
    std::vector<std::vector<RawRecord>> groups;
    for (auto& rec : parsed.records) {
        if (groups.empty() || groups.back().front().cyclone_id != rec.cyclone_id)
            groups.emplace_back();
        groups.back().push_back(std::move(rec));
    }
    summary.cyclones_in = groups.size();

    std::vector<CycloneTrack> tracks;
    for (auto& group : groups) {
        const std::string id = group.front().cyclone_id;
        if (group.size() < 2) {
            ++summary.cyclones_rejected_too_short;
            summary.messages.push_back("skip " + id + ": fewer than 2 records");
            continue;
        }
        std::vector<RawRecord> filled;
        try {
            filled = interpolate_gaps(group);
        } catch (const InvalidInput& e) {
            ++summary.cyclones_rejected_too_short;
            summary.messages.push_back("skip " + id + ": " + e.what());
            continue;
        }
        summary.records_interpolated += filled.size() - group.size();
        TruncationResult trunc = truncate_at_landfall(filled);
        switch (trunc.outcome) {
            case TruncationOutcome::no_landfall:
                ++summary.cyclones_rejected_no_landfall;
                summary.messages.push_back("reject " + id + ": no landfall");
                continue;
            case TruncationOutcome::too_short:
                ++summary.cyclones_rejected_too_short;
                summary.messages.push_back("reject " + id + ": fewer than 2 points at landfall");
                continue;
            case TruncationOutcome::kept:
                break;
        }
        derive_motion(trunc.track);
        summary.records_out += trunc.track.size();
        ++summary.cyclones_kept;
        tracks.push_back(std::move(trunc.track));
    }
    return tracks;
}

void write_tracks_csv(std::ostream& out, const std::vector<CycloneTrack>& tracks) {
    out << "cyclone_id,timestamp,lat,lon,msws_kt,ecp_hpa,sst_c,landfall\n";
    for (const auto& track : tracks) {
        for (std::size_t i = 0; i < track.points.size(); ++i) {
            const TrackPoint& p = track.points[i];
            RawRecord r;
            r.cyclone_id = track.cyclone_id;
            r.timestamp = track.start_time + static_cast<std::int64_t>(p.t_hours * 3600.0);
            r.lat_deg = p.lat_deg;
            r.lon_deg = p.lon_deg;
            r.msws_kt = p.msws_kt;
            r.ecp_hpa = p.ecp_hpa;
            r.sst_c = p.sst_c;
            r.landfall = (i + 1 == track.points.size());
            write_record_row(out, r);
        }
    }
}

}  // namespace tclf
