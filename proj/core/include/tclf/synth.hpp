#ifndef TCLF_SYNTH_HPP
#define TCLF_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "tclf/ingest.hpp"

namespace tclf {

// Deterministic synthetic best-track corpus for tests and demos: smooth
// curved paths drifting toward a synthetic coastline, intensity rising then
// falling, ECP anti-correlated with MSWS, SST smooth in space. Every cyclone
// carries exactly one landfall-flagged row; MSWS stays within [10, 140] kt;
// track length up to landfall is between 12 and 60 points.
struct SynthOptions {
    int n_cyclones = 10;
    std::uint64_t seed = 0;
    // Rows emitted after the landfall row (flag 0), exercising truncation.
    int post_landfall_rows = 2;
};

std::vector<RawRecord> synth_best_track(const SynthOptions& options);

}  // namespace tclf

#endif
