// tclf: tropical-cyclone landfall forecasting pipeline.
//
// Subcommands: synth, ingest, train, evaluate, predict, sliding-eval.
// Exit codes: 0 success, 1 internal fault, 2 user/input error.

#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tclf/csv.hpp"
#include "tclf/errors.hpp"
#include "tclf/eval.hpp"
#include "tclf/ingest.hpp"
#include "tclf/io.hpp"
#include "tclf/manifest.hpp"
#include "tclf/models.hpp"
#include "tclf/preprocess.hpp"
#include "tclf/synth.hpp"
#include "tclf/timeutil.hpp"
#include "tclf/windows.hpp"

namespace {

using namespace tclf;

std::string now_iso() {
    return format_iso8601(static_cast<UnixTime>(std::time(nullptr)));
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);
    return in;
}

std::vector<CycloneTrack> load_tracks(const std::string& path, const std::string& sst_path,
                                      bool print_summary) {
    std::optional<SstGrid> grid;
    if (!sst_path.empty()) {
        std::ifstream gin = open_input(sst_path);
        grid = SstGrid::read_csv(gin);
    }
    std::ifstream in = open_input(path);
    IngestSummary summary;
    auto tracks = ingest_tracks(in, grid ? &*grid : nullptr, summary);
    for (const auto& msg : summary.messages) std::cerr << "note: " << msg << "\n";
    if (print_summary) {
        std::cout << "cyclones: " << summary.cyclones_in << " in, " << summary.cyclones_kept
                  << " kept, "
                  << (summary.cyclones_rejected_no_landfall + summary.cyclones_rejected_too_short)
                  << " rejected (" << summary.cyclones_rejected_no_landfall << " no-landfall, "
                  << summary.cyclones_rejected_too_short << " too-short)\n";
        std::cout << "records: " << summary.records_in << " in, " << summary.records_out
                  << " kept, " << summary.records_interpolated << " interpolated";
        if (summary.duplicates_dropped)
            std::cout << ", " << summary.duplicates_dropped << " duplicates dropped";
        std::cout << "\n";
        if (summary.parse_errors)
            std::cout << "parse errors: " << summary.parse_errors << " row(s) skipped\n";
    }
    return tracks;
}

ModelConfig config_for(const std::string& kind, TargetSet targets, int window_length,
                       int hidden) {
    if (kind == "intensity-time") return intensity_time_config(window_length, hidden);
    if (kind == "location") return location_config(window_length, hidden);
    if (kind == "ann" || kind == "gru")
        return baseline_config(kind, targets, window_length, hidden);
    throw ConfigError("unknown model kind '" + kind +
                      "' (expected intensity-time, location, ann, or gru)");
}

Eigen::MatrixXd read_window_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::vector<std::array<double, kNumFeatures>> rows;
    while (reader.next(fields)) {
        if (rows.empty() && !fields.empty() && !parse_double_field(fields[0]))
            continue;  // header row
        if (fields.size() != kNumFeatures)
            throw InvalidInput("window file line " + std::to_string(reader.line_number()) +
                               ": expected " + std::to_string(kNumFeatures) + " fields, got " +
                               std::to_string(fields.size()));
        std::array<double, kNumFeatures> row{};
        for (int c = 0; c < kNumFeatures; ++c) {
            const auto v = parse_double_field(fields[c]);
            if (!v)
                throw InvalidInput("window file line " + std::to_string(reader.line_number()) +
                                   ": unparseable value '" + fields[c] + "'");
            row[c] = *v;
        }
        rows.push_back(row);
    }
    Eigen::MatrixXd x(rows.size(), kNumFeatures);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < kNumFeatures; ++c) x(static_cast<Eigen::Index>(r), c) = rows[r][c];
    return x;
}

struct CommonTrainFlags {
    int window_length = 8;
    std::uint64_t seed = 0;
    int epochs = -1;  // -1: keep config default
    int hidden = 64;
    int batch_size = -1;
    double learning_rate = -1.0;
    double clip_norm = -1.0;
    std::string targets = "intensity-time";
};

void apply_overrides(ModelConfig& config, const CommonTrainFlags& flags) {
    config.seed = flags.seed;
    if (flags.epochs >= 0) config.epochs = flags.epochs;
    if (flags.batch_size > 0) config.batch_size = flags.batch_size;
    if (flags.learning_rate > 0) config.learning_rate = flags.learning_rate;
    if (flags.clip_norm >= 0) config.grad_clip_norm = flags.clip_norm;
}

TargetSet parse_targets_flag(const std::string& value) {
    if (value == "intensity-time") return TargetSet::intensity_time;
    if (value == "location") return TargetSet::location;
    throw ConfigError("unknown --targets value '" + value +
                      "' (expected intensity-time or location)");
}

RunManifest start_manifest(const std::string& command, const std::vector<std::string>& args,
                           std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.arguments = args;
    m.seed = seed;
    m.started_at = now_iso();
    return m;
}

// ----------------------------------------------------------------- commands

int cmd_synth(int n, std::uint64_t seed, const std::string& out) {
    SynthOptions opt;
    opt.n_cyclones = n;
    opt.seed = seed;
    const auto records = synth_best_track(opt);
    std::ostringstream csv;
    write_best_track_csv(csv, records);
    write_file_atomic(out, csv.str());
    std::cout << "wrote " << records.size() << " records (" << n << " cyclones) to " << out
              << "\n";
    return 0;
}

int cmd_ingest(const std::string& input, const std::string& sst, const std::string& out) {
    const auto tracks = load_tracks(input, sst, true);
    std::ostringstream csv;
    write_tracks_csv(csv, tracks);
    write_file_atomic(out, csv.str());
    std::cout << "wrote " << tracks.size() << " cleaned tracks to " << out << "\n";
    return 0;
}

int cmd_train(const std::string& tracks_path, const std::string& sst, const std::string& kind,
              const CommonTrainFlags& flags, const std::vector<std::string>& holdout,
              const std::string& out, const std::string& export_dataset_path,
              const std::vector<std::string>& raw_args) {
    RunManifest manifest = start_manifest("train", raw_args, flags.seed);
    manifest.inputs[tracks_path] = file_digest_hex(tracks_path);
    if (!sst.empty()) manifest.inputs[sst] = file_digest_hex(sst);

    const auto tracks = load_tracks(tracks_path, sst, false);
    ModelConfig config =
        config_for(kind, parse_targets_flag(flags.targets), flags.window_length, flags.hidden);
    apply_overrides(config, flags);

    BuildReport report;
    const std::set<std::string> holdout_ids(holdout.begin(), holdout.end());
    const Dataset dataset =
        build_dataset(tracks, flags.window_length, holdout_ids, nullptr, &report);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (!export_dataset_path.empty()) {
        std::ostringstream csv;
        export_dataset_csv(csv, dataset);
        write_file_atomic(export_dataset_path, csv.str());
    }

    std::cout << "dataset size for T=" << flags.window_length << ": " << dataset.samples.size()
              << " samples from " << report.tracks_used << " cyclones";
    if (report.tracks_skipped_short)
        std::cout << " (" << report.tracks_skipped_short << " skipped as shorter than T)";
    std::cout << "\n";

    const TrainedModel model = train(config, dataset);
    save_model(model, out);
    std::cout << "final training loss: " << model.metadata.final_loss << "\n";
    std::cout << "model written to " << out << "\n";

    manifest.finished_at = now_iso();
    write_manifest(manifest, out + ".manifest.json");
    return 0;
}

int cmd_evaluate(const std::string& tracks_path, const std::string& sst,
                 const std::vector<std::string>& kinds, const CommonTrainFlags& flags, int k,
                 const std::string& out_dir, const std::vector<std::string>& raw_args) {
    RunManifest manifest = start_manifest("evaluate", raw_args, flags.seed);
    manifest.inputs[tracks_path] = file_digest_hex(tracks_path);

    const auto tracks = load_tracks(tracks_path, sst, false);
    std::vector<std::string> ids;
    for (const auto& t : tracks) ids.push_back(t.cyclone_id);
    const FoldPlan plan = plan_folds(ids, k, flags.seed);

    std::filesystem::create_directories(out_dir);

    // Baselines report both target sets; the primary kinds carry their own.
    std::vector<std::pair<std::string, ModelConfig>> runs;
    for (const auto& kind : kinds) {
        if (kind == "intensity-time" || kind == "location") {
            runs.emplace_back(kind, config_for(kind, TargetSet::intensity_time,
                                               flags.window_length, flags.hidden));
        } else if (kind == "ann" || kind == "gru") {
            runs.emplace_back(kind + "-intensity-time",
                              baseline_config(kind, TargetSet::intensity_time,
                                              flags.window_length, flags.hidden));
            runs.emplace_back(kind + "-location",
                              baseline_config(kind, TargetSet::location, flags.window_length,
                                              flags.hidden));
        } else {
            throw ConfigError("unknown model kind '" + kind + "'");
        }
    }

    for (auto& [label, config] : runs) {
        apply_overrides(config, flags);
        const MetricReport report =
            cross_validate(tracks, flags.window_length, config, plan, training_factory(), label);
        print_metric_report(std::cout, report);
        std::ostringstream json_out;
        write_metric_report_json(json_out, report);
        const std::string path = out_dir + "/report_" + label + ".json";
        write_file_atomic(path, json_out.str());
        std::cout << "report written to " << path << "\n";
    }

    manifest.finished_at = now_iso();
    write_manifest(manifest, out_dir + "/evaluate.manifest.json");
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& window_path) {
    const TrainedModel model = load_model(model_path);
    const Eigen::MatrixXd window = read_window_csv(window_path);
    if (window.rows() != model.config.window_length)
        throw InvalidInput("window has " + std::to_string(window.rows()) +
                           " rows but the model expects T=" +
                           std::to_string(model.config.window_length));
    char buf[64];
    if (model.config.target_set == TargetSet::intensity_time) {
        const IntensityTimePrediction p = predict_intensity_time(model, window);
        const Grade g = grade_of(std::max(0.0, p.msws_kt));
        std::snprintf(buf, sizeof(buf), "msws_kt: %.2f\n", p.msws_kt);
        std::cout << buf;
        std::cout << "grade: " << g.label << " (" << g.grade << ")\n";
        std::snprintf(buf, sizeof(buf), "hours_to_landfall: %.2f\n", p.hours_to_landfall);
        std::cout << buf;
    } else {
        const LocationPrediction p = predict_location(model, window);
        std::snprintf(buf, sizeof(buf), "lat_deg: %.2f\nlon_deg: %.2f\n", p.lat_deg, p.lon_deg);
        std::cout << buf;
    }
    return 0;
}

int cmd_sliding_eval(const std::string& model_path, const std::string& tracks_path,
                     const std::string& cyclone_id, int window_length, const std::string& out,
                     const std::vector<std::string>& raw_args) {
    const TrainedModel model = load_model(model_path);
    if (window_length > 0 && window_length != model.config.window_length)
        throw InvalidInput("--window-length " + std::to_string(window_length) +
                           " does not match the model's T=" +
                           std::to_string(model.config.window_length));
    RunManifest manifest = start_manifest("sliding-eval", raw_args, model.config.seed);
    manifest.inputs[tracks_path] = file_digest_hex(tracks_path);
    manifest.inputs[model_path] = file_digest_hex(model_path);

    const auto tracks = load_tracks(tracks_path, "", false);
    const CycloneTrack* track = nullptr;
    for (const auto& t : tracks)
        if (t.cyclone_id == cyclone_id) track = &t;
    if (!track) throw InvalidInput("cyclone id '" + cyclone_id + "' not found in " + tracks_path);

    const SlidingEvalResult result = sliding_eval(*track, model, model.config.window_length);
    if (result.trained_on_track)
        std::cerr << "warning: cyclone '" << cyclone_id
                  << "' was part of this model's training data\n";

    std::ostringstream csv;
    write_trace_csv(csv, result);
    write_file_atomic(out, csv.str());

    std::cout << "windows evaluated: " << result.rows.size() << "\n";
    char buf[96];
    for (std::size_t t = 0; t < result.target_labels.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%s: MAE %.3f  RMSE %.3f\n",
                      result.target_labels[t].c_str(), result.mae[t], result.rmse[t]);
        std::cout << buf;
    }
    if (result.distance_km_mean) {
        std::snprintf(buf, sizeof(buf), "mean distance error: %.1f km\n",
                      *result.distance_km_mean);
        std::cout << buf;
    }
    std::cout << "trace written to " << out << "\n";

    manifest.finished_at = now_iso();
    write_manifest(manifest, out + ".manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tclf: tropical-cyclone landfall forecasting pipeline"};
    app.require_subcommand(1);
    std::vector<std::string> raw_args(argv + 1, argv + argc);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic best-track corpus");
    int synth_n = 10;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "synthetic.csv";
    synth->add_option("--cyclones", synth_n, "Number of cyclones")->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_seed, "Generator seed")->envname("TCLF_SEED");
    synth->add_option("--out", synth_out, "Output best-track CSV")->required();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Clean a best-track file into 3-hourly tracks");
    std::string ingest_in, ingest_sst, ingest_out;
    ingest->add_option("--input", ingest_in, "Best-track CSV")->required();
    ingest->add_option("--sst", ingest_sst, "SST grid CSV (date,lat,lon,sst_c)");
    ingest->add_option("--out", ingest_out, "Cleaned tracks CSV")->required();

    // shared train/evaluate flags
    CommonTrainFlags t_flags, e_flags;

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model on cleaned tracks");
    std::string train_tracks, train_sst, train_kind, train_out, train_export;
    std::vector<std::string> train_holdout;
    train_cmd->add_option("--tracks", train_tracks, "Cleaned tracks CSV")->required();
    train_cmd->add_option("--sst", train_sst, "SST grid CSV");
    train_cmd->add_option("--model", train_kind, "intensity-time | location | ann | gru")
        ->required();
    train_cmd->add_option("--targets", t_flags.targets,
                          "Target set for ann/gru baselines (intensity-time | location)");
    train_cmd->add_option("--window-length", t_flags.window_length, "T, observations per window")
        ->check(CLI::Range(2, 1000));
    train_cmd->add_option("--seed", t_flags.seed, "Training seed")->envname("TCLF_SEED");
    train_cmd->add_option("--epochs", t_flags.epochs, "Override training epochs");
    train_cmd->add_option("--hidden", t_flags.hidden, "Recurrent layer width")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--batch-size", t_flags.batch_size, "Override batch size");
    train_cmd->add_option("--learning-rate", t_flags.learning_rate, "Override learning rate");
    train_cmd->add_option("--clip-norm", t_flags.clip_norm, "Gradient norm clip (0 disables)");
    train_cmd->add_option("--holdout", train_holdout, "Cyclone id excluded from training");
    train_cmd->add_option("--export-dataset", train_export,
                          "Also export the window dataset CSV");
    train_cmd->add_option("--out", train_out, "Output model file")->required();

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "K-fold cross-validation of model kinds");
    std::string eval_tracks, eval_sst, eval_out_dir = "reports";
    std::vector<std::string> eval_kinds;
    int eval_k = 5;
    eval_cmd->add_option("--tracks", eval_tracks, "Cleaned tracks CSV")->required();
    eval_cmd->add_option("--sst", eval_sst, "SST grid CSV");
    eval_cmd
        ->add_option("--models", eval_kinds, "Model kinds (intensity-time, location, ann, gru)")
        ->required()
        ->delimiter(',');
    eval_cmd->add_option("--folds", eval_k, "Number of folds")->check(CLI::Range(2, 1000));
    eval_cmd->add_option("--window-length", e_flags.window_length, "T, observations per window")
        ->check(CLI::Range(2, 1000));
    eval_cmd->add_option("--seed", e_flags.seed, "Fold/training seed")->envname("TCLF_SEED");
    eval_cmd->add_option("--epochs", e_flags.epochs, "Override training epochs");
    eval_cmd->add_option("--hidden", e_flags.hidden, "Recurrent layer width")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--batch-size", e_flags.batch_size, "Override batch size");
    eval_cmd->add_option("--learning-rate", e_flags.learning_rate, "Override learning rate");
    eval_cmd->add_option("--clip-norm", e_flags.clip_norm, "Gradient norm clip (0 disables)");
    eval_cmd->add_option("--out-dir", eval_out_dir, "Directory for report files");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict from one observation window");
    std::string predict_model, predict_window;
    predict_cmd->add_option("--model", predict_model, "Trained model file")->required();
    predict_cmd->add_option("--window", predict_window, "CSV with T rows of the 7 features")
        ->required();

    // sliding-eval
    auto* slide_cmd =
        app.add_subcommand("sliding-eval", "Per-window predictions over one cyclone");
    std::string slide_model, slide_tracks, slide_id, slide_out = "trace.csv";
    int slide_window = 0;
    slide_cmd->add_option("--model", slide_model, "Trained model file")->required();
    slide_cmd->add_option("--tracks", slide_tracks, "Cleaned tracks CSV")->required();
    slide_cmd->add_option("--cyclone", slide_id, "Cyclone id to evaluate")->required();
    slide_cmd->add_option("--window-length", slide_window,
                          "T (must match the model; informational)");
    slide_cmd->add_option("--out", slide_out, "Trace CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_n, synth_seed, synth_out);
        if (ingest->parsed()) return cmd_ingest(ingest_in, ingest_sst, ingest_out);
        if (train_cmd->parsed())
            return cmd_train(train_tracks, train_sst, train_kind, t_flags, train_holdout,
                             train_out, train_export, raw_args);
        if (eval_cmd->parsed())
            return cmd_evaluate(eval_tracks, eval_sst, eval_kinds, e_flags, eval_k, eval_out_dir,
                                raw_args);
        if (predict_cmd->parsed()) return cmd_predict(predict_model, predict_window);
        if (slide_cmd->parsed())
            return cmd_sliding_eval(slide_model, slide_tracks, slide_id, slide_window, slide_out,
                                    raw_args);
    } catch (const TrainingFault& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SerializationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
