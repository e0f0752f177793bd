#ifndef TCLF_EVAL_HPP
#define TCLF_EVAL_HPP

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tclf/geo.hpp"
#include "tclf/models.hpp"
#include "tclf/track.hpp"
#include "tclf/windows.hpp"

namespace tclf {

// MAE = (1/n) sum |y_i - pred_i|; RMSE = sqrt((1/n) sum (y_i - pred_i)^2).
double mae(const std::vector<double>& pred, const std::vector<double>& actual);
double rmse(const std::vector<double>& pred, const std::vector<double>& actual);

// Great-circle distance between predicted and actual landfall locations.
double distance_error_km(const GeoPoint& pred, const GeoPoint& actual);

// Cyclone-level fold assignment: seeded shuffle then round-robin, sizes
// differing by at most one.
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::string>> folds;

    int fold_of(const std::string& cyclone_id) const;  // -1 when absent
};

FoldPlan plan_folds(std::vector<std::string> cyclone_ids, int k, std::uint64_t seed);

// Prediction seam: raw windows in, natural-unit outputs (n x 2) out. The
// default factory trains a model on the fold's training dataset; tests
// inject stubs here.
using WindowPredictor = std::function<Eigen::MatrixXd(const std::vector<WindowSample>&)>;
using PredictorFactory = std::function<WindowPredictor(const Dataset&, const ModelConfig&)>;

PredictorFactory training_factory();

struct MetricAggregate {
    double mean = 0.0;
    double std = 0.0;  // population std across fold values
};

struct FoldMetrics {
    int fold = 0;
    std::size_t train_samples = 0;
    std::size_t test_samples = 0;
    std::vector<double> mae;   // per target
    std::vector<double> rmse;  // per target
    std::optional<double> distance_km;  // location models: mean over samples
};

struct MetricReport {
    std::string model_label;
    TargetSet target_set = TargetSet::intensity_time;
    int window_length = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::size_t dataset_size = 0;  // training samples over the whole corpus
    std::vector<std::string> target_labels;
    std::vector<FoldMetrics> folds;
    std::vector<MetricAggregate> mae;
    std::vector<MetricAggregate> rmse;
    std::optional<MetricAggregate> distance_km;
};

// Per fold: windows and scaler from the training cyclones only, model
// trained there, metrics on the held-out cyclones' windows; aggregates are
// mean +- population std across folds. The fold seed is config.seed + fold.
MetricReport cross_validate(const std::vector<CycloneTrack>& tracks, int window_length,
                            const ModelConfig& config, const FoldPlan& plan,
                            const PredictorFactory& factory = training_factory(),
                            const std::string& model_label = "");

struct SlidingEvalRow {
    int k = 1;
    double hour_of_prediction = 0.0;  // hour of the window's last observation
    Eigen::Vector2d predicted;
    Eigen::Vector2d actual;
};

struct SlidingEvalResult {
    std::string cyclone_id;
    TargetSet target_set = TargetSet::intensity_time;
    std::vector<std::string> target_labels;
    std::vector<SlidingEvalRow> rows;  // one per window position
    std::vector<double> mae;           // per target, averaged over windows
    std::vector<double> rmse;
    std::optional<double> distance_km_mean;
    bool trained_on_track = false;  // model saw this cyclone during training
};

// One prediction per window position k = 1..T_L-T+1 of a single track.
SlidingEvalResult sliding_eval(const CycloneTrack& track, const TrainedModel& model,
                               int window_length);
SlidingEvalResult sliding_eval_with(const CycloneTrack& track, TargetSet target_set,
                                    int window_length, const WindowPredictor& predictor);

// Machine-readable report and the human-readable table.
void write_metric_report_json(std::ostream& out, const MetricReport& report);
void print_metric_report(std::ostream& out, const MetricReport& report);

// Prediction trace for external plotting: hour_of_prediction plus
// predicted/actual per target.
void write_trace_csv(std::ostream& out, const SlidingEvalResult& result);

}  // namespace tclf

#endif
