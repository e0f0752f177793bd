#ifndef TCLF_WINDOWS_HPP
#define TCLF_WINDOWS_HPP

#include <Eigen/Core>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "tclf/preprocess.hpp"
#include "tclf/track.hpp"

namespace tclf {

// Landfall targets of one training sample.
struct Targets {
    double msws_kt;
    double lat_deg;
    double lon_deg;
    double hours_to_landfall;
};

// One supervised sample: T consecutive observations and the track's landfall
// targets. Window k (1-based) covers track rows k..k+T-1; hours_to_landfall
// is measured from the window's last observation.
struct WindowSample {
    std::string cyclone_id;
    int k = 1;
    Eigen::MatrixXd x;  // T x 7 in canonical feature order
    Targets y{};
};

struct Dataset {
    int window_length = 0;  // T
    std::vector<WindowSample> samples;
    Scaler feature_scaler;  // fit on the rows of the training samples
};

// All T_L - T + 1 windows of one track. Tracks shorter than T yield an empty
// vector (skip, not an error). Requires T >= 2.
std::vector<WindowSample> make_windows(const CycloneTrack& track, int window_length);

struct BuildReport {
    std::size_t tracks_used = 0;
    std::size_t tracks_skipped_short = 0;
    std::vector<std::string> warnings;
};

// Samples from every non-holdout track, deterministically ordered by
// (cyclone_id, k), with the feature scaler fit on training rows only.
// Holdout tracks are returned whole and contribute nothing to the scaler.
// Throws InvalidInput when no track is long enough.
Dataset build_dataset(const std::vector<CycloneTrack>& tracks, int window_length,
                      const std::set<std::string>& holdout_ids,
                      std::vector<CycloneTrack>* holdout_out = nullptr,
                      BuildReport* report = nullptr);

// Stacks every row of every sample into an (n*T) x 7 matrix, for scaler
// fitting and inspection.
Eigen::MatrixXd feature_rows(const std::vector<WindowSample>& samples);

// Delimited export: cyclone_id, k, x{row}_{feature} for row 1..T, then the
// four targets.
void export_dataset_csv(std::ostream& out, const Dataset& dataset);

}  // namespace tclf

#endif
