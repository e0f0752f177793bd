#ifndef TCLF_MODELS_HPP
#define TCLF_MODELS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tclf/nn/network.hpp"
#include "tclf/preprocess.hpp"
#include "tclf/windows.hpp"

namespace tclf {

enum class TargetSet { intensity_time, location };

std::string target_set_name(TargetSet t);
TargetSet target_set_from_name(const std::string& name);

// Target column names in output order.
std::vector<std::string> target_names(TargetSet t);

struct ModelConfig {
    TargetSet target_set = TargetSet::intensity_time;
    int window_length = 8;  // T
    std::vector<nn::LayerSpec> layers;
    int epochs = 150;
    double learning_rate = 0.01;
    int batch_size = 32;
    std::uint64_t seed = 0;
    bool scale_targets = false;
    double grad_clip_norm = 0.0;   // 0 = off
    bool allow_nonstandard = false; // skips the 3-recurrent + dense shape check
};

// The paper's two architectures: 3 stacked LSTM layers + dense(2) with
// Swish(2x) for intensity/time, 3 stacked BiLSTM layers + dense(2) with
// ReLU and scaled targets for location.
ModelConfig intensity_time_config(int window_length, int hidden = 64);
ModelConfig location_config(int window_length, int hidden = 64);

enum class BaselineKind { ann, gru };
BaselineKind baseline_kind_from_name(const std::string& name);

// ANN: flattened T x 7 input through dense 1024/512/256/128/32, Swish(2x).
// GRU: the primary stacks with gru layers substituted. Requesting any other
// baseline (e.g. a 1D-CNN) is an unsupported-baseline ConfigError.
ModelConfig baseline_config(BaselineKind kind, TargetSet targets, int window_length,
                            int hidden = 64);
ModelConfig baseline_config(const std::string& kind_name, TargetSet targets, int window_length,
                            int hidden = 64);

// Shape checks beyond the generic stack validation: output width 2 and,
// unless allow_nonstandard, exactly 3 recurrent layers + 1 dense output.
void validate_config(const ModelConfig& config);

struct TrainingMetadata {
    double final_loss = 0.0;
    std::vector<double> epoch_losses;
    std::string data_fingerprint;
    std::vector<std::string> training_cyclone_ids;
};

// Self-contained trained artifact: architecture, learned parameters, and the
// scalers needed to map raw windows to predictions.
struct TrainedModel {
    ModelConfig config;
    std::map<std::string, Eigen::MatrixXd> parameters;
    Scaler feature_scaler;
    std::optional<Scaler> target_scaler;  // present iff config.scale_targets
    TrainingMetadata metadata;
};

// Runs exactly config.epochs Adam passes over the (scaled) dataset.
// Deterministic for a fixed seed and dataset. Throws TrainingFault naming
// the epoch if the loss goes non-finite.
TrainedModel train(const ModelConfig& config, const Dataset& dataset);

struct IntensityTimePrediction {
    double msws_kt;
    double hours_to_landfall;
};
struct LocationPrediction {
    double lat_deg;
    double lon_deg;
};

IntensityTimePrediction predict_intensity_time(const TrainedModel& model,
                                               const Eigen::MatrixXd& window);
LocationPrediction predict_location(const TrainedModel& model, const Eigen::MatrixXd& window);

// Batched inference in natural units; rows align with `windows`. Builds the
// network once, so use this for evaluation loops.
Eigen::MatrixXd predict_batch(const TrainedModel& model,
                              const std::vector<WindowSample>& windows);

// True targets of a sample in the model's output order.
Eigen::Vector2d targets_of(TargetSet target_set, const WindowSample& sample);

// Model file: "TCLF1" magic, version, config/scaler/metadata header,
// base64 parameter payload, trailing checksum line.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& bytes);

}  // namespace tclf

#endif
