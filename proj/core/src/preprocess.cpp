#include "tclf/preprocess.hpp"

#include <cmath>

#include "tclf/errors.hpp"
#include "tclf/geo.hpp"

namespace tclf {

namespace {
constexpr std::int64_t kStepSeconds = kRecordIntervalHours * 3600;
}

std::vector<RawRecord> interpolate_gaps(const std::vector<RawRecord>& points) {
    if (points.size() < 2) throw InvalidInput("interpolate_gaps: need at least two points");
    std::vector<RawRecord> out;
    out.push_back(points.front());
    for (std::size_t i = 1; i < points.size(); ++i) {
        const RawRecord& a = points[i - 1];
        const RawRecord& b = points[i];
        const std::int64_t span = b.timestamp - a.timestamp;
        if (span <= 0)
            throw InvalidInput("interpolate_gaps: timestamps not strictly increasing for '" +
                               a.cyclone_id + "' at " + format_iso8601(b.timestamp));
        if (span % kStepSeconds != 0)
            throw InvalidInput("interpolate_gaps: gap of " + std::to_string(span / 3600.0) +
                               " h for '" + a.cyclone_id + "' is not a multiple of 3 hours");
        const std::int64_t n = span / kStepSeconds;
        for (std::int64_t k = 1; k < n; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(n);
            RawRecord mid;
            mid.cyclone_id = a.cyclone_id;
            mid.timestamp = a.timestamp + k * kStepSeconds;
            mid.lat_deg = a.lat_deg + f * (b.lat_deg - a.lat_deg);
            mid.lon_deg = a.lon_deg + f * (b.lon_deg - a.lon_deg);
            mid.msws_kt = a.msws_kt + f * (b.msws_kt - a.msws_kt);
            mid.ecp_hpa = a.ecp_hpa + f * (b.ecp_hpa - a.ecp_hpa);
            if (a.sst_c && b.sst_c)
                mid.sst_c = *a.sst_c + f * (*b.sst_c - *a.sst_c);
            mid.landfall = false;
            out.push_back(mid);
        }
        out.push_back(b);
    }
    return out;
}

void derive_motion(CycloneTrack& track) {
    if (track.points.empty()) return;
    track.points[0].distance_km = 0.0;
    track.points[0].direction_deg = 0.0;
    for (std::size_t i = 1; i < track.points.size(); ++i) {
        const GeoPoint prev{track.points[i - 1].lat_deg, track.points[i - 1].lon_deg};
        const GeoPoint cur{track.points[i].lat_deg, track.points[i].lon_deg};
        track.points[i].distance_km = haversine_km(prev, cur);
        track.points[i].direction_deg = initial_bearing_deg(prev, cur);
    }
}

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size())
        throw InvalidInput("Scaler::transform: expected " + std::to_string(mean.size()) +
                           " columns, got " + std::to_string(x.cols()));
    return (x.rowwise() - mean.transpose()).array().rowwise() /
           std.transpose().array();
}

Eigen::MatrixXd Scaler::inverse_transform(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size())
        throw InvalidInput("Scaler::inverse_transform: expected " + std::to_string(mean.size()) +
                           " columns, got " + std::to_string(x.cols()));
    return (x.array().rowwise() * std.transpose().array()).rowwise() +
           mean.transpose().array();
}

Eigen::VectorXd Scaler::transform_row(const Eigen::VectorXd& row) const {
    if (row.size() != mean.size())
        throw InvalidInput("Scaler::transform_row: dimension mismatch");
    return (row - mean).cwiseQuotient(std);
}

Eigen::VectorXd Scaler::inverse_transform_row(const Eigen::VectorXd& row) const {
    if (row.size() != mean.size())
        throw InvalidInput("Scaler::inverse_transform_row: dimension mismatch");
    return row.cwiseProduct(std) + mean;
}

Scaler fit_scaler(const Eigen::MatrixXd& samples, std::vector<std::string> feature_names) {
    if (samples.rows() < 2)
        throw InvalidInput("fit_scaler: need at least 2 samples, got " +
                           std::to_string(samples.rows()));
    Scaler s;
    s.feature_names = std::move(feature_names);
    const Eigen::Index cols = samples.cols();
    s.mean = samples.colwise().mean();
    s.std.resize(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const double var = (samples.col(c).array() - s.mean(c)).square().mean();
        double sd = std::sqrt(var);
        if (sd == 0.0) {
            sd = 1.0;
            s.constant_columns.push_back(static_cast<int>(c));
        }
        s.std(c) = sd;
    }
    return s;
}

Grade grade_of(double msws_kt) {
    if (!(msws_kt >= 0.0))
        throw InvalidInput("grade_of: msws must be non-negative, got " +
                           std::to_string(msws_kt));
    if (msws_kt < 17.0) return {0, "LP"};
    if (msws_kt < 28.0) return {1, "D"};
    if (msws_kt < 34.0) return {2, "DD"};
    if (msws_kt < 48.0) return {3, "CS"};
    if (msws_kt < 64.0) return {4, "SCS"};
    if (msws_kt < 90.0) return {5, "VSCS"};
    if (msws_kt < 120.0) return {6, "ESCS"};
    return {7, "SS"};
}

}  // namespace tclf
