#ifndef TCLF_PREPROCESS_HPP
#define TCLF_PREPROCESS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "tclf/ingest.hpp"
#include "tclf/track.hpp"

namespace tclf {

// Fills every missing 3-hour slot between known endpoints with the linear
// rule d(t_3k) = d(t_0) + k * D, D = (d(t_3n) - d(t_0)) / n, applied
// independently per feature (lat, lon, msws, ecp, sst). Known points are
// returned unchanged; inserted rows carry landfall = false.
// pre: >= 2 records, sorted, single cyclone, timestamps 3-hour aligned.
// Throws InvalidInput when timestamps are not multiples of 3 hours apart.
std::vector<RawRecord> interpolate_gaps(const std::vector<RawRecord>& points);

// Fills distance/direction from consecutive positions: point 0 gets (0, 0),
// point i >= 1 gets haversine and initial bearing from point i-1.
void derive_motion(CycloneTrack& track);

// Per-feature standardization x -> (x - mu) / sigma with population sigma.
struct Scaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    std::vector<std::string> feature_names;
    std::vector<int> constant_columns;  // columns whose sigma was guarded to 1

    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd transform_row(const Eigen::VectorXd& row) const;
    Eigen::VectorXd inverse_transform_row(const Eigen::VectorXd& row) const;
};

// Column means and population standard deviations. Constant columns get
// sigma = 1 and are listed in constant_columns. Requires >= 2 rows.
Scaler fit_scaler(const Eigen::MatrixXd& samples,
                  std::vector<std::string> feature_names = {});

// IMD grade of a low-pressure system by maximum sustained surface wind.
struct Grade {
    int grade;          // 0..7
    const char* label;  // LP, D, DD, CS, SCS, VSCS, ESCS, SS
};

// Half-open knot bands: <17 LP, [17,28) D, [28,34) DD, [34,48) CS,
// [48,64) SCS, [64,90) VSCS, [90,120) ESCS, >=120 SS.
Grade grade_of(double msws_kt);

}  // namespace tclf

#endif
