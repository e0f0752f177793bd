#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tclf/digest.hpp"
#include "tclf/errors.hpp"
#include "tclf/models.hpp"

using namespace tclf;

namespace {

Dataset small_dataset(int n_tracks = 3, int window_length = 6, std::uint64_t seed = 11) {
    const auto tracks = testing::synth_tracks(n_tracks, seed);
    return build_dataset(tracks, window_length, {});
}

ModelConfig tiny_intensity(int window_length = 6) {
    ModelConfig c = intensity_time_config(window_length, 8);
    c.epochs = 40;
    c.seed = 5;
    return c;
}

void zero_all_params(TrainedModel& model) {
    for (auto& [name, value] : model.parameters) value.setZero();
}

}  // namespace

TEST_CASE("primary configs have the required shape") {
    const ModelConfig m1 = intensity_time_config(8);
    CHECK(m1.layers.size() == 4);
    CHECK(m1.layers[0].kind == nn::LayerKind::lstm);
    CHECK(m1.layers[2].returns_sequence == false);
    CHECK(m1.layers[3].output_size == 2);
    CHECK(m1.layers[0].activation.kind == nn::ActKind::swish);
    CHECK(m1.layers[0].activation.beta == 2.0);
    CHECK_FALSE(m1.scale_targets);
    CHECK(m1.epochs == 150);
    CHECK(m1.learning_rate == 0.01);
    CHECK_NOTHROW(validate_config(m1));

    const ModelConfig m2 = location_config(8);
    CHECK(m2.layers[0].kind == nn::LayerKind::bilstm);
    CHECK(m2.layers[0].activation.kind == nn::ActKind::relu);
    CHECK(m2.layers[3].input_size == 2 * m2.layers[2].output_size);
    CHECK(m2.scale_targets);
    CHECK_NOTHROW(validate_config(m2));
}

TEST_CASE("config validation rejects nonstandard stacks without the override") {
    ModelConfig c = intensity_time_config(8);
    c.layers[3].output_size = 3;
    CHECK_THROWS_AS(validate_config(c), ConfigError);

    ModelConfig extra = intensity_time_config(8, 4);
    nn::LayerSpec more{nn::LayerKind::dense, 2, 2, false, nn::linear_act()};
    extra.layers[3].output_size = 2;
    extra.layers.push_back(more);
    extra.layers[3].activation = nn::swish_act(2.0);
    CHECK_THROWS_AS(validate_config(extra), ConfigError);
    extra.allow_nonstandard = true;
    CHECK_NOTHROW(validate_config(extra));

    ModelConfig wrong_scaling = intensity_time_config(8);
    wrong_scaling.scale_targets = true;
    CHECK_THROWS_AS(validate_config(wrong_scaling), ConfigError);
}

TEST_CASE("ann baseline flattens the window through the documented widths") {
    const ModelConfig ann = baseline_config(BaselineKind::ann, TargetSet::intensity_time, 8);
    REQUIRE(ann.layers.size() == 6);
    CHECK(ann.layers[0].input_size == 56);
    CHECK(ann.layers[0].output_size == 1024);
    CHECK(ann.layers[1].output_size == 512);
    CHECK(ann.layers[2].output_size == 256);
    CHECK(ann.layers[3].output_size == 128);
    CHECK(ann.layers[4].output_size == 32);
    CHECK(ann.layers[5].output_size == 2);
    CHECK(ann.layers[0].activation.kind == nn::ActKind::swish);
    CHECK(ann.allow_nonstandard);
    CHECK_NOTHROW(validate_config(ann));
}

TEST_CASE("gru baseline mirrors the primary widths with gru layers") {
    const ModelConfig gru = baseline_config(BaselineKind::gru, TargetSet::location, 8);
    REQUIRE(gru.layers.size() == 4);
    for (int i = 0; i < 3; ++i) CHECK(gru.layers[i].kind == nn::LayerKind::gru);
    CHECK(gru.layers[0].output_size == 64);
    CHECK(gru.scale_targets);
    CHECK_NOTHROW(validate_config(gru));
}

TEST_CASE("unsupported baselines are rejected") {
    CHECK_THROWS_AS(baseline_config("1d-cnn", TargetSet::intensity_time, 8), ConfigError);
    CHECK_THROWS_AS(baseline_config("cnn", TargetSet::location, 8), ConfigError);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const Dataset ds = small_dataset();
    const ModelConfig config = tiny_intensity();
    const TrainedModel a = train(config, ds);
    const TrainedModel b = train(config, ds);
    CHECK(a.metadata.epoch_losses == b.metadata.epoch_losses);
    CHECK(serialize_model(a) == serialize_model(b));

    ModelConfig other = config;
    other.seed = 6;
    const TrainedModel c = train(other, ds);
    CHECK(serialize_model(a) != serialize_model(c));
}

TEST_CASE("epochs = 0 keeps initialization weights and an empty loss history") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity();
    config.epochs = 0;
    const TrainedModel m = train(config, ds);
    CHECK(m.metadata.epoch_losses.empty());

    nn::Network net(config.layers, config.window_length, kNumFeatures);
    net.init_params(config.seed);
    for (nn::Parameter* p : net.parameters())
        CHECK(m.parameters.at(p->name) == p->value);
}

TEST_CASE("train validates dataset shape and emptiness") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity(8);  // T mismatch vs dataset T=6
    CHECK_THROWS_AS(train(config, ds), InvalidInput);
    Dataset empty;
    empty.window_length = 6;
    CHECK_THROWS_AS(train(tiny_intensity(), empty), InvalidInput);
}

TEST_CASE("intensity model overfits a memorized sample") {
    const auto tracks = testing::synth_tracks(1, 21);
    Dataset ds = build_dataset(tracks, 6, {});
    ds.samples.resize(std::min<std::size_t>(ds.samples.size(), 8));
    ModelConfig config = intensity_time_config(6);
    config.epochs = 500;
    config.seed = 2;
    const TrainedModel m = train(config, ds);
    CHECK(m.metadata.final_loss < 1e-2);

    const WindowSample& s = ds.samples[3];
    const IntensityTimePrediction p = predict_intensity_time(m, s.x);
    CHECK(std::abs(p.msws_kt - s.y.msws_kt) < 0.5);
    CHECK(std::abs(p.hours_to_landfall - s.y.hours_to_landfall) < 0.5);
}

TEST_CASE("location model overfits a memorized sample") {
    const auto tracks = testing::synth_tracks(1, 22);
    Dataset ds = build_dataset(tracks, 6, {});
    ds.samples.resize(std::min<std::size_t>(ds.samples.size(), 8));
    ModelConfig config = location_config(6, 10);
    config.epochs = 400;
    config.seed = 3;
    const TrainedModel m = train(config, ds);

    const WindowSample& s = ds.samples[2];
    const LocationPrediction p = predict_location(m, s.x);
    CHECK(std::abs(p.lat_deg - s.y.lat_deg) < 0.05);
    CHECK(std::abs(p.lon_deg - s.y.lon_deg) < 0.05);
}

TEST_CASE("zeroed-out model predicts bias outputs") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity();
    config.epochs = 0;
    TrainedModel m = train(config, ds);
    zero_all_params(m);
    const IntensityTimePrediction p = predict_intensity_time(m, ds.samples[0].x);
    CHECK(p.msws_kt == 0.0);
    CHECK(p.hours_to_landfall == 0.0);

    // A zeroed location model emits the target scaler's means.
    ModelConfig loc = location_config(6, 8);
    loc.epochs = 0;
    loc.seed = 4;
    TrainedModel ml = train(loc, ds);
    zero_all_params(ml);
    REQUIRE(ml.target_scaler.has_value());
    const LocationPrediction pl = predict_location(ml, ds.samples[0].x);
    CHECK(pl.lat_deg == doctest::Approx(ml.target_scaler->mean(0)).epsilon(1e-12));
    CHECK(pl.lon_deg == doctest::Approx(ml.target_scaler->mean(1)).epsilon(1e-12));
}

TEST_CASE("prediction input validation") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity();
    config.epochs = 1;
    const TrainedModel m = train(config, ds);

    Eigen::MatrixXd wrong(4, kNumFeatures);
    wrong.setZero();
    CHECK_THROWS_AS(predict_intensity_time(m, wrong), InvalidInput);

    Eigen::MatrixXd with_nan = ds.samples[0].x;
    with_nan(2, 3) = std::nan("");
    CHECK_THROWS_AS(predict_intensity_time(m, with_nan), InvalidInput);

    CHECK_THROWS_AS(predict_location(m, ds.samples[0].x), InvalidInput);
}

TEST_CASE("fingerprint records the training cyclones") {
    const Dataset ds = small_dataset(3);
    ModelConfig config = tiny_intensity();
    config.epochs = 1;
    const TrainedModel m = train(config, ds);
    CHECK(m.metadata.training_cyclone_ids.size() == 3);
    CHECK(!m.metadata.data_fingerprint.empty());
}

TEST_CASE("save/load round trip preserves predictions bit-exactly") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity();
    config.epochs = 10;
    const TrainedModel m = train(config, ds);

    const std::string bytes = serialize_model(m);
    const TrainedModel loaded = deserialize_model(bytes);

    for (const auto& s : ds.samples) {
        const auto a = predict_intensity_time(m, s.x);
        const auto b = predict_intensity_time(loaded, s.x);
        CHECK(a.msws_kt == b.msws_kt);
        CHECK(a.hours_to_landfall == b.hours_to_landfall);
    }
    CHECK(serialize_model(loaded) == bytes);
    CHECK(loaded.metadata.epoch_losses == m.metadata.epoch_losses);
    CHECK(loaded.config.seed == m.config.seed);
}

TEST_CASE("model files reject corruption, truncation, and unknown versions") {
    const Dataset ds = small_dataset();
    ModelConfig config = tiny_intensity();
    config.epochs = 1;
    const std::string bytes = serialize_model(train(config, ds));

    // Truncated: checksum line gone.
    CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() / 2)), SerializationError);

    // Flipped byte in the payload.
    std::string corrupted = bytes;
    corrupted[bytes.size() / 3] ^= 0x01;
    CHECK_THROWS_AS(deserialize_model(corrupted), SerializationError);

    // Wrong magic.
    std::string bad_magic = "XXXXX" + bytes.substr(5);
    const std::size_t mark = bad_magic.rfind("\nfnv1a64:");
    bad_magic = bad_magic.substr(0, mark + 1);
    bad_magic += "fnv1a64:" + to_hex(fnv1a64(bad_magic)) + "\n";
    CHECK_THROWS_WITH_AS(deserialize_model(bad_magic), doctest::Contains("magic"),
                         SerializationError);

    // Unknown format version, checksum recomputed so only the version trips.
    std::string versioned = bytes;
    const std::size_t pos = versioned.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    versioned.replace(pos, 18, "\"format_version\":9");
    const std::size_t vmark = versioned.rfind("\nfnv1a64:");
    versioned = versioned.substr(0, vmark + 1);
    versioned += "fnv1a64:" + to_hex(fnv1a64(versioned)) + "\n";
    CHECK_THROWS_WITH_AS(deserialize_model(versioned), doctest::Contains("version"),
                         SerializationError);
}

TEST_CASE("epoch losses are non-increasing under a 20-epoch moving average") {
    const auto tracks = testing::synth_tracks(6, 31);
    const Dataset ds = build_dataset(tracks, 6, {});
    ModelConfig config = intensity_time_config(6, 12);
    config.epochs = 60;
    config.seed = 9;
    const TrainedModel m = train(config, ds);
    const auto& losses = m.metadata.epoch_losses;
    REQUIRE(losses.size() == 60);
    const auto moving = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t j = i; j < i + 20; ++j) s += losses[j];
        return s / 20.0;
    };
    for (std::size_t i = 0; i + 21 <= losses.size(); ++i)
        CHECK(moving(i + 1) <= moving(i) * (1.0 + 1e-9));
}

TEST_CASE("target scaler fit is idempotent for location models") {
    const Dataset ds = small_dataset();
    Eigen::MatrixXd y(ds.samples.size(), 2);
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        y.row(i) = targets_of(TargetSet::location, ds.samples[i]).transpose();
    const Scaler s1 = fit_scaler(y, target_names(TargetSet::location));
    const Scaler s2 = fit_scaler(y, target_names(TargetSet::location));
    CHECK(s1.mean == s2.mean);
    CHECK(s1.std == s2.std);
}
