#include "tclf/models.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tclf/digest.hpp"
#include "tclf/errors.hpp"
#include "tclf/io.hpp"
#include "tclf/nn/adam.hpp"
#include "tclf/nn/loss.hpp"
#include "tclf/rng.hpp"

namespace tclf {
namespace {

using nlohmann::json;

constexpr const char* kMagic = "TCLF1";
constexpr int kFormatVersion = 1;

// ------------------------------------------------------------ base64

constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string b64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned v = data[i] << 16;
        if (i + 1 < len) v |= data[i + 1] << 8;
        if (i + 2 < len) v |= data[i + 2];
        out.push_back(kB64Chars[(v >> 18) & 63]);
        out.push_back(kB64Chars[(v >> 12) & 63]);
        out.push_back(i + 1 < len ? kB64Chars[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? kB64Chars[v & 63] : '=');
    }
    return out;
}

std::vector<unsigned char> b64_decode(const std::string& text) {
    int lookup[256];
    std::fill(std::begin(lookup), std::end(lookup), -1);
    for (int i = 0; i < 64; ++i) lookup[static_cast<unsigned char>(kB64Chars[i])] = i;
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    unsigned acc = 0;
    int bits = 0;
    for (char ch : text) {
        if (ch == '=') break;
        const int v = lookup[static_cast<unsigned char>(ch)];
        if (v < 0) throw SerializationError("invalid base64 payload");
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

std::string doubles_to_b64(const double* data, std::size_t count) {
    return b64_encode(reinterpret_cast<const unsigned char*>(data), count * sizeof(double));
}

std::vector<double> b64_to_doubles(const std::string& text) {
    const std::vector<unsigned char> bytes = b64_decode(text);
    if (bytes.size() % sizeof(double) != 0)
        throw SerializationError("parameter payload is not a whole number of doubles");
    std::vector<double> out(bytes.size() / sizeof(double));
    std::memcpy(out.data(), bytes.data(), bytes.size());
    return out;
}

// ------------------------------------------------------------ json glue

json activation_to_json(const nn::ActivationSpec& a) {
    json j;
    j["kind"] = nn::act_kind_name(a.kind);
    if (a.kind == nn::ActKind::swish) j["beta"] = a.beta;
    return j;
}

nn::ActivationSpec activation_from_json(const json& j) {
    nn::ActivationSpec a;
    a.kind = nn::act_kind_from_name(j.at("kind").get<std::string>());
    a.beta = j.value("beta", 1.0);
    return a;
}

json layers_to_json(const std::vector<nn::LayerSpec>& layers) {
    json arr = json::array();
    for (const auto& l : layers) {
        json j;
        j["kind"] = nn::layer_kind_name(l.kind);
        j["input_size"] = l.input_size;
        j["output_size"] = l.output_size;
        j["returns_sequence"] = l.returns_sequence;
        j["activation"] = activation_to_json(l.activation);
        arr.push_back(j);
    }
    return arr;
}

std::vector<nn::LayerSpec> layers_from_json(const json& arr) {
    std::vector<nn::LayerSpec> out;
    for (const auto& j : arr) {
        nn::LayerSpec l;
        l.kind = nn::layer_kind_from_name(j.at("kind").get<std::string>());
        l.input_size = j.at("input_size").get<int>();
        l.output_size = j.at("output_size").get<int>();
        l.returns_sequence = j.at("returns_sequence").get<bool>();
        l.activation = activation_from_json(j.at("activation"));
        out.push_back(l);
    }
    return out;
}

json scaler_to_json(const Scaler& s) {
    json j;
    j["feature_names"] = s.feature_names;
    j["mean_b64"] = doubles_to_b64(s.mean.data(), s.mean.size());
    j["std_b64"] = doubles_to_b64(s.std.data(), s.std.size());
    j["constant_columns"] = s.constant_columns;
    return j;
}

Scaler scaler_from_json(const json& j) {
    Scaler s;
    s.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const auto mean = b64_to_doubles(j.at("mean_b64").get<std::string>());
    const auto std_v = b64_to_doubles(j.at("std_b64").get<std::string>());
    s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
    s.std = Eigen::Map<const Eigen::VectorXd>(std_v.data(), std_v.size());
    s.constant_columns = j.value("constant_columns", std::vector<int>{});
    return s;
}

// Builds the network and loads the stored parameter values into it.
nn::Network materialize(const TrainedModel& model) {
    nn::Network net(model.config.layers, model.config.window_length, kNumFeatures);
    for (nn::Parameter* p : net.parameters()) {
        const auto it = model.parameters.find(p->name);
        if (it == model.parameters.end())
            throw SerializationError("model is missing parameter '" + p->name + "'");
        if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
            throw SerializationError("parameter '" + p->name + "' has wrong shape");
        p->value = it->second;
    }
    return net;
}

Eigen::MatrixXd scale_window(const TrainedModel& model, const Eigen::MatrixXd& window) {
    if (window.rows() != model.config.window_length || window.cols() != kNumFeatures)
        throw InvalidInput("predict: expected a " + std::to_string(model.config.window_length) +
                           "x" + std::to_string(kNumFeatures) + " window, got " +
                           std::to_string(window.rows()) + "x" + std::to_string(window.cols()));
    if (!window.allFinite()) throw InvalidInput("predict: non-finite value in input window");
    return model.feature_scaler.transform(window);
}

Eigen::MatrixXd forward_windows(nn::Network& net, const TrainedModel& model,
                                const std::vector<const Eigen::MatrixXd*>& scaled) {
    const int t_len = model.config.window_length;
    const Eigen::Index batch = static_cast<Eigen::Index>(scaled.size());
    nn::Sequence input(t_len, Eigen::MatrixXd(batch, kNumFeatures));
    for (Eigen::Index b = 0; b < batch; ++b)
        for (int t = 0; t < t_len; ++t) input[t].row(b) = scaled[b]->row(t);
    Eigen::MatrixXd out = net.forward(input);
    if (model.config.scale_targets) {
        if (!model.target_scaler)
            throw ConfigError("model scales targets but carries no target scaler");
        out = model.target_scaler->inverse_transform(out);
    }
    return out;
}

}  // namespace

std::string target_set_name(TargetSet t) {
    return t == TargetSet::intensity_time ? "intensity_time" : "location";
}

TargetSet target_set_from_name(const std::string& name) {
    if (name == "intensity_time") return TargetSet::intensity_time;
    if (name == "location") return TargetSet::location;
    throw ConfigError("unknown target set '" + name + "'");
}

std::vector<std::string> target_names(TargetSet t) {
    if (t == TargetSet::intensity_time) return {"msws_kt", "hours_to_landfall"};
    return {"lat_deg", "lon_deg"};
}

ModelConfig intensity_time_config(int window_length, int hidden) {
    ModelConfig c;
    c.target_set = TargetSet::intensity_time;
    c.window_length = window_length;
    c.scale_targets = false;
    const nn::ActivationSpec act = nn::swish_act(2.0);
    c.layers = {
        {nn::LayerKind::lstm, kNumFeatures, hidden, true, act},
        {nn::LayerKind::lstm, hidden, hidden, true, act},
        {nn::LayerKind::lstm, hidden, hidden, false, act},
        {nn::LayerKind::dense, hidden, 2, false, nn::linear_act()},
    };
    return c;
}

ModelConfig location_config(int window_length, int hidden) {
    ModelConfig c;
    c.target_set = TargetSet::location;
    c.window_length = window_length;
    c.scale_targets = true;
    const nn::ActivationSpec act{nn::ActKind::relu, 1.0};
    c.layers = {
        {nn::LayerKind::bilstm, kNumFeatures, hidden, true, act},
        {nn::LayerKind::bilstm, 2 * hidden, hidden, true, act},
        {nn::LayerKind::bilstm, 2 * hidden, hidden, false, act},
        {nn::LayerKind::dense, 2 * hidden, 2, false, nn::linear_act()},
    };
    return c;
}

BaselineKind baseline_kind_from_name(const std::string& name) {
    if (name == "ann") return BaselineKind::ann;
    if (name == "gru") return BaselineKind::gru;
    throw ConfigError("unsupported baseline '" + name + "' (supported: ann, gru)");
}

ModelConfig baseline_config(BaselineKind kind, TargetSet targets, int window_length,
                            int hidden) {
    if (kind == BaselineKind::ann) {
        ModelConfig c;
        c.target_set = targets;
        c.window_length = window_length;
        c.scale_targets = (targets == TargetSet::location);
        c.allow_nonstandard = true;
        const nn::ActivationSpec act = nn::swish_act(2.0);
        const int flat = window_length * kNumFeatures;
        const int widths[] = {1024, 512, 256, 128, 32};
        int in = flat;
        for (int w : widths) {
            c.layers.push_back({nn::LayerKind::dense, in, w, false, act});
            in = w;
        }
        c.layers.push_back({nn::LayerKind::dense, in, 2, false, nn::linear_act()});
        return c;
    }
    // GRU baseline: the primary stacks with gru layers in place of the
    // recurrent kind; standard recurrence with tanh candidates.
    ModelConfig c = (targets == TargetSet::intensity_time)
                        ? intensity_time_config(window_length, hidden)
                        : location_config(window_length, hidden);
    const nn::ActivationSpec act{nn::ActKind::tanh, 1.0};
    c.layers = {
        {nn::LayerKind::gru, kNumFeatures, hidden, true, act},
        {nn::LayerKind::gru, hidden, hidden, true, act},
        {nn::LayerKind::gru, hidden, hidden, false, act},
        {nn::LayerKind::dense, hidden, 2, false, nn::linear_act()},
    };
    return c;
}

ModelConfig baseline_config(const std::string& kind_name, TargetSet targets, int window_length,
                            int hidden) {
    return baseline_config(baseline_kind_from_name(kind_name), targets, window_length, hidden);
}

void validate_config(const ModelConfig& config) {
    if (config.window_length < 2)
        throw ConfigError("config: window length must be >= 2");
    if (config.epochs < 0) throw ConfigError("config: epochs must be >= 0");
    if (!(config.learning_rate > 0.0)) throw ConfigError("config: learning rate must be > 0");
    if (config.batch_size < 1) throw ConfigError("config: batch size must be >= 1");
    nn::validate_stack(config.layers, config.window_length, kNumFeatures);
    if (config.layers.back().output_size != 2)
        throw ConfigError("config: output layer must have width 2");
    if (!config.allow_nonstandard) {
        const bool standard_shape =
            config.layers.size() == 4 && config.layers[0].kind != nn::LayerKind::dense &&
            config.layers[1].kind != nn::LayerKind::dense &&
            config.layers[2].kind != nn::LayerKind::dense &&
            config.layers[3].kind == nn::LayerKind::dense;
        if (!standard_shape)
            throw ConfigError(
                "config: stack must be 3 recurrent layers + 1 dense output "
                "(set allow_nonstandard to override)");
        const bool expect_scaled = (config.target_set == TargetSet::location);
        if (config.scale_targets != expect_scaled)
            throw ConfigError(std::string("config: ") + target_set_name(config.target_set) +
                              " models must have scale_targets = " +
                              (expect_scaled ? "true" : "false") +
                              " (set allow_nonstandard to override)");
    }
}

Eigen::Vector2d targets_of(TargetSet target_set, const WindowSample& sample) {
    if (target_set == TargetSet::intensity_time)
        return {sample.y.msws_kt, sample.y.hours_to_landfall};
    return {sample.y.lat_deg, sample.y.lon_deg};
}

TrainedModel train(const ModelConfig& config, const Dataset& dataset) {
    validate_config(config);
    if (dataset.samples.empty()) throw InvalidInput("train: empty dataset");
    if (dataset.window_length != config.window_length)
        throw InvalidInput("train: dataset window length " +
                           std::to_string(dataset.window_length) + " != config window length " +
                           std::to_string(config.window_length));

    const std::size_t n = dataset.samples.size();
    const int t_len = config.window_length;

    // Scale features once; scale targets when the config says so.
    std::vector<Eigen::MatrixXd> x_scaled;
    x_scaled.reserve(n);
    Eigen::MatrixXd y(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        x_scaled.push_back(dataset.feature_scaler.transform(dataset.samples[i].x));
        y.row(i) = targets_of(config.target_set, dataset.samples[i]).transpose();
    }
    std::optional<Scaler> target_scaler;
    if (config.scale_targets) {
        target_scaler = fit_scaler(y, target_names(config.target_set));
        y = target_scaler->transform(y);
    }

    nn::Network net(config.layers, t_len, kNumFeatures);
    net.init_params(config.seed);
    nn::AdamState adam({config.learning_rate, 0.9, 0.999, 1e-8});
    std::vector<nn::Parameter*> params = net.parameters();

    Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
    TrainingMetadata meta;
    meta.epoch_losses.reserve(config.epochs);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t bn = std::min(batch_size, n - start);
            nn::Sequence input(t_len, Eigen::MatrixXd(bn, kNumFeatures));
            Eigen::MatrixXd y_batch(bn, 2);
            for (std::size_t j = 0; j < bn; ++j) {
                const std::size_t idx = order[start + j];
                for (int t = 0; t < t_len; ++t) input[t].row(j) = x_scaled[idx].row(t);
                y_batch.row(j) = y.row(idx);
            }
            net.zero_grad();
            const Eigen::MatrixXd pred = net.forward(input);
            const nn::Loss loss = nn::mse_loss_batch(pred, y_batch);
            if (!std::isfinite(loss.value))
                throw TrainingFault("train: non-finite loss at epoch " + std::to_string(epoch));
            net.backward(loss.grad);
            if (config.grad_clip_norm > 0.0) nn::clip_gradient_norm(params, config.grad_clip_norm);
            nn::adam_step(adam, params);
            loss_sum += loss.value * static_cast<double>(bn);
        }
        meta.epoch_losses.push_back(loss_sum / static_cast<double>(n));
    }
    meta.final_loss = meta.epoch_losses.empty() ? 0.0 : meta.epoch_losses.back();

    std::set<std::string> ids;
    for (const auto& s : dataset.samples) ids.insert(s.cyclone_id);
    meta.training_cyclone_ids.assign(ids.begin(), ids.end());
    std::string fp;
    for (const auto& id : meta.training_cyclone_ids) fp += id + ",";
    fp += "|T=" + std::to_string(t_len) + "|n=" + std::to_string(n);
    meta.data_fingerprint = to_hex(fnv1a64(fp));

    TrainedModel model;
    model.config = config;
    for (const nn::Parameter* p : params) model.parameters.emplace(p->name, p->value);
    model.feature_scaler = dataset.feature_scaler;
    model.target_scaler = std::move(target_scaler);
    model.metadata = std::move(meta);
    return model;
}

Eigen::MatrixXd predict_batch(const TrainedModel& model,
                              const std::vector<WindowSample>& windows) {
    if (windows.empty()) return Eigen::MatrixXd(0, 2);
    nn::Network net = materialize(model);
    std::vector<Eigen::MatrixXd> scaled;
    scaled.reserve(windows.size());
    for (const auto& w : windows) scaled.push_back(scale_window(model, w.x));
    std::vector<const Eigen::MatrixXd*> views;
    views.reserve(scaled.size());
    for (const auto& m : scaled) views.push_back(&m);
    return forward_windows(net, model, views);
}

IntensityTimePrediction predict_intensity_time(const TrainedModel& model,
                                               const Eigen::MatrixXd& window) {
    if (model.config.target_set != TargetSet::intensity_time)
        throw InvalidInput("predict_intensity_time: model predicts " +
                           target_set_name(model.config.target_set));
    nn::Network net = materialize(model);
    const Eigen::MatrixXd scaled = scale_window(model, window);
    const Eigen::MatrixXd out = forward_windows(net, model, {&scaled});
    return {out(0, 0), out(0, 1)};
}

LocationPrediction predict_location(const TrainedModel& model, const Eigen::MatrixXd& window) {
    if (model.config.target_set != TargetSet::location)
        throw InvalidInput("predict_location: model predicts " +
                           target_set_name(model.config.target_set));
    nn::Network net = materialize(model);
    const Eigen::MatrixXd scaled = scale_window(model, window);
    const Eigen::MatrixXd out = forward_windows(net, model, {&scaled});
    return {out(0, 0), out(0, 1)};
}

std::string serialize_model(const TrainedModel& model) {
    json j;
    j["format_version"] = kFormatVersion;
    json cfg;
    cfg["target_set"] = target_set_name(model.config.target_set);
    cfg["window_length"] = model.config.window_length;
    cfg["layers"] = layers_to_json(model.config.layers);
    cfg["epochs"] = model.config.epochs;
    cfg["learning_rate"] = model.config.learning_rate;
    cfg["batch_size"] = model.config.batch_size;
    cfg["seed"] = model.config.seed;
    cfg["scale_targets"] = model.config.scale_targets;
    cfg["grad_clip_norm"] = model.config.grad_clip_norm;
    cfg["allow_nonstandard"] = model.config.allow_nonstandard;
    j["config"] = cfg;
    j["feature_scaler"] = scaler_to_json(model.feature_scaler);
    j["target_scaler"] = model.target_scaler ? scaler_to_json(*model.target_scaler) : json();
    json meta;
    meta["final_loss"] = model.metadata.final_loss;
    meta["epoch_losses_b64"] =
        doubles_to_b64(model.metadata.epoch_losses.data(), model.metadata.epoch_losses.size());
    meta["data_fingerprint"] = model.metadata.data_fingerprint;
    meta["training_cyclone_ids"] = model.metadata.training_cyclone_ids;
    j["metadata"] = meta;
    json params;
    for (const auto& [name, value] : model.parameters) {
        json p;
        p["rows"] = value.rows();
        p["cols"] = value.cols();
        p["data_b64"] = doubles_to_b64(value.data(), static_cast<std::size_t>(value.size()));
        params[name] = p;
    }
    j["parameters"] = params;

    std::string body = std::string(kMagic) + "\n" + j.dump() + "\n";
    body += "fnv1a64:" + to_hex(fnv1a64(body)) + "\n";
    return body;
}

TrainedModel deserialize_model(const std::string& bytes) {
    const std::size_t mark = bytes.rfind("\nfnv1a64:");
    if (mark == std::string::npos)
        throw SerializationError("missing checksum line (truncated model file?)");
    const std::string payload = bytes.substr(0, mark + 1);
    std::string check = bytes.substr(mark + 1);
    while (!check.empty() && (check.back() == '\n' || check.back() == '\r')) check.pop_back();
    if (check != "fnv1a64:" + to_hex(fnv1a64(payload)))
        throw SerializationError("checksum mismatch (corrupted model file)");

    const std::size_t first_nl = payload.find('\n');
    if (first_nl == std::string::npos || payload.substr(0, first_nl) != kMagic)
        throw SerializationError("not a TCLF model file (bad magic)");

    json j;
    try {
        j = json::parse(payload.substr(first_nl + 1));
    } catch (const json::exception& e) {
        throw SerializationError(std::string("malformed model header: ") + e.what());
    }
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion)
        throw SerializationError("unsupported model format version " + std::to_string(version));

    TrainedModel model;
    const json& cfg = j.at("config");
    model.config.target_set = target_set_from_name(cfg.at("target_set").get<std::string>());
    model.config.window_length = cfg.at("window_length").get<int>();
    model.config.layers = layers_from_json(cfg.at("layers"));
    model.config.epochs = cfg.at("epochs").get<int>();
    model.config.learning_rate = cfg.at("learning_rate").get<double>();
    model.config.batch_size = cfg.at("batch_size").get<int>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.config.scale_targets = cfg.at("scale_targets").get<bool>();
    model.config.grad_clip_norm = cfg.at("grad_clip_norm").get<double>();
    model.config.allow_nonstandard = cfg.at("allow_nonstandard").get<bool>();

    model.feature_scaler = scaler_from_json(j.at("feature_scaler"));
    if (!j.at("target_scaler").is_null())
        model.target_scaler = scaler_from_json(j.at("target_scaler"));
    if (model.config.scale_targets && !model.target_scaler)
        throw SerializationError("model scales targets but carries no target scaler");

    const json& meta = j.at("metadata");
    model.metadata.final_loss = meta.at("final_loss").get<double>();
    const auto losses = b64_to_doubles(meta.at("epoch_losses_b64").get<std::string>());
    model.metadata.epoch_losses.assign(losses.begin(), losses.end());
    model.metadata.data_fingerprint = meta.at("data_fingerprint").get<std::string>();
    model.metadata.training_cyclone_ids =
        meta.at("training_cyclone_ids").get<std::vector<std::string>>();

    for (const auto& [name, p] : j.at("parameters").items()) {
        const Eigen::Index rows = p.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = p.at("cols").get<Eigen::Index>();
        const auto data = b64_to_doubles(p.at("data_b64").get<std::string>());
        if (static_cast<Eigen::Index>(data.size()) != rows * cols)
            throw SerializationError("parameter '" + name + "' payload size mismatch");
        model.parameters.emplace(
            name, Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols));
    }
    // Rebuild the network once so shape problems surface at load time.
    materialize(model);
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    write_file_atomic(path, serialize_model(model));
}

TrainedModel load_model(const std::string& path) {
    return deserialize_model(read_file(path));
}

}  // namespace tclf
