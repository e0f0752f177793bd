#include "tclf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "tclf/errors.hpp"
#include "tclf/rng.hpp"

namespace tclf {
namespace {

using nlohmann::json;

void check_lengths(const std::vector<double>& pred, const std::vector<double>& actual,
                   const char* who) {
    if (pred.size() != actual.size())
        throw InvalidInput(std::string(who) + ": length mismatch (" +
                           std::to_string(pred.size()) + " vs " + std::to_string(actual.size()) +
                           ")");
    if (pred.empty()) throw InvalidInput(std::string(who) + ": empty vectors");
}

MetricAggregate aggregate(const std::vector<double>& values) {
    MetricAggregate a;
    const double n = static_cast<double>(values.size());
    for (double v : values) a.mean += v;
    a.mean /= n;
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(sq / n);
    return a;
}

GeoPoint sanitize_prediction(double lat, double lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon))
        throw InvalidInput("non-finite location prediction");
    return {clamp_latitude_deg(lat), wrap_longitude_deg(lon)};
}

}  // namespace

double mae(const std::vector<double>& pred, const std::vector<double>& actual) {
    check_lengths(pred, actual, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - actual[i]);
    return sum / static_cast<double>(pred.size());
}

double rmse(const std::vector<double>& pred, const std::vector<double>& actual) {
    check_lengths(pred, actual, "rmse");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        sum += (pred[i] - actual[i]) * (pred[i] - actual[i]);
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double distance_error_km(const GeoPoint& pred, const GeoPoint& actual) {
    return haversine_km(pred, actual);
}

int FoldPlan::fold_of(const std::string& cyclone_id) const {
    for (std::size_t f = 0; f < folds.size(); ++f)
        for (const auto& id : folds[f])
            if (id == cyclone_id) return static_cast<int>(f);
    return -1;
}

FoldPlan plan_folds(std::vector<std::string> cyclone_ids, int k, std::uint64_t seed) {
    if (k < 2) throw InvalidInput("plan_folds: k must be >= 2");
    std::sort(cyclone_ids.begin(), cyclone_ids.end());
    cyclone_ids.erase(std::unique(cyclone_ids.begin(), cyclone_ids.end()), cyclone_ids.end());
    if (cyclone_ids.size() < static_cast<std::size_t>(k))
        throw InvalidInput("plan_folds: " + std::to_string(cyclone_ids.size()) +
                           " cyclones cannot fill " + std::to_string(k) + " folds");
    Rng rng(seed);
    rng.shuffle(cyclone_ids);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.assign(k, {});
    for (std::size_t i = 0; i < cyclone_ids.size(); ++i)
        plan.folds[i % k].push_back(cyclone_ids[i]);
    return plan;
}

PredictorFactory training_factory() {
    return [](const Dataset& train_set, const ModelConfig& config) -> WindowPredictor {
        auto model = std::make_shared<TrainedModel>(train(config, train_set));
        return [model](const std::vector<WindowSample>& windows) {
            return predict_batch(*model, windows);
        };
    };
}

namespace {

struct EvalBatch {
    std::vector<double> pred[2], actual[2];
    std::vector<double> dist;

    void add(TargetSet target_set, const Eigen::MatrixXd& preds,
             const std::vector<WindowSample>& windows) {
        for (Eigen::Index i = 0; i < preds.rows(); ++i) {
            const Eigen::Vector2d y = targets_of(target_set, windows[i]);
            for (int t = 0; t < 2; ++t) {
                pred[t].push_back(preds(i, t));
                actual[t].push_back(y(t));
            }
            if (target_set == TargetSet::location) {
                const GeoPoint p = sanitize_prediction(preds(i, 0), preds(i, 1));
                dist.push_back(distance_error_km(p, {y(0), y(1)}));
            }
        }
    }
};

}  // namespace

MetricReport cross_validate(const std::vector<CycloneTrack>& tracks, int window_length,
                            const ModelConfig& config, const FoldPlan& plan,
                            const PredictorFactory& factory, const std::string& model_label) {
    for (const auto& track : tracks)
        if (plan.fold_of(track.cyclone_id) < 0)
            throw InvalidInput("cross_validate: fold plan does not cover cyclone '" +
                               track.cyclone_id + "'");

    MetricReport report;
    report.model_label = model_label.empty() ? target_set_name(config.target_set) : model_label;
    report.target_set = config.target_set;
    report.window_length = window_length;
    report.k = plan.k;
    report.seed = config.seed;
    report.target_labels = target_names(config.target_set);

    std::vector<double> fold_mae[2], fold_rmse[2], fold_dist;

    for (int f = 0; f < plan.k; ++f) {
        std::vector<CycloneTrack> train_tracks;
        std::vector<const CycloneTrack*> test_tracks;
        for (const auto& track : tracks) {
            if (plan.fold_of(track.cyclone_id) == f) test_tracks.push_back(&track);
            else train_tracks.push_back(track);
        }
        std::sort(test_tracks.begin(), test_tracks.end(),
                  [](const CycloneTrack* a, const CycloneTrack* b) {
                      return a->cyclone_id < b->cyclone_id;
                  });

        Dataset train_set;
        try {
            train_set = build_dataset(train_tracks, window_length, {});
        } catch (const InvalidInput& e) {
            throw InvalidInput("cross_validate: fold " + std::to_string(f) +
                               " has no training windows: " + e.what());
        }

        std::vector<WindowSample> test_windows;
        for (const CycloneTrack* track : test_tracks) {
            auto w = make_windows(*track, window_length);
            std::move(w.begin(), w.end(), std::back_inserter(test_windows));
        }
        if (test_windows.empty())
            throw InvalidInput("cross_validate: fold " + std::to_string(f) +
                               " has no test windows");

        ModelConfig fold_config = config;
        fold_config.seed = config.seed + static_cast<std::uint64_t>(f);
        const WindowPredictor predictor = factory(train_set, fold_config);
        const Eigen::MatrixXd preds = predictor(test_windows);
        if (preds.rows() != static_cast<Eigen::Index>(test_windows.size()) || preds.cols() != 2)
            throw InvalidInput("cross_validate: predictor returned wrong shape");

        EvalBatch batch;
        batch.add(config.target_set, preds, test_windows);

        FoldMetrics fm;
        fm.fold = f;
        fm.train_samples = train_set.samples.size();
        fm.test_samples = test_windows.size();
        for (int t = 0; t < 2; ++t) {
            fm.mae.push_back(mae(batch.pred[t], batch.actual[t]));
            fm.rmse.push_back(rmse(batch.pred[t], batch.actual[t]));
            fold_mae[t].push_back(fm.mae.back());
            fold_rmse[t].push_back(fm.rmse.back());
        }
        if (config.target_set == TargetSet::location) {
            double sum = 0.0;
            for (double d : batch.dist) sum += d;
            fm.distance_km = sum / static_cast<double>(batch.dist.size());
            fold_dist.push_back(*fm.distance_km);
        }
        report.dataset_size += fm.test_samples;
        report.folds.push_back(std::move(fm));
    }

    for (int t = 0; t < 2; ++t) {
        report.mae.push_back(aggregate(fold_mae[t]));
        report.rmse.push_back(aggregate(fold_rmse[t]));
    }
    if (!fold_dist.empty()) report.distance_km = aggregate(fold_dist);
    return report;
}

namespace {

SlidingEvalResult sliding_eval_impl(const CycloneTrack& track, TargetSet target_set,
                                    int window_length, const WindowPredictor& predictor,
                                    bool trained_on_track) {
    const std::vector<WindowSample> windows = make_windows(track, window_length);
    if (windows.empty())
        throw InvalidInput("sliding_eval: track '" + track.cyclone_id + "' has " +
                           std::to_string(track.size()) + " points, shorter than T=" +
                           std::to_string(window_length));

    SlidingEvalResult res;
    res.cyclone_id = track.cyclone_id;
    res.target_set = target_set;
    res.target_labels = target_names(target_set);
    res.trained_on_track = trained_on_track;

    const Eigen::MatrixXd preds = predictor(windows);
    if (preds.rows() != static_cast<Eigen::Index>(windows.size()) || preds.cols() != 2)
        throw InvalidInput("sliding_eval: predictor returned wrong shape");

    EvalBatch batch;
    batch.add(target_set, preds, windows);

    for (std::size_t i = 0; i < windows.size(); ++i) {
        SlidingEvalRow row;
        row.k = windows[i].k;
        row.hour_of_prediction = track.points[windows[i].k + window_length - 2].t_hours;
        row.predicted = preds.row(static_cast<Eigen::Index>(i)).transpose();
        row.actual = targets_of(target_set, windows[i]);
        res.rows.push_back(row);
    }
    for (int t = 0; t < 2; ++t) {
        res.mae.push_back(mae(batch.pred[t], batch.actual[t]));
        res.rmse.push_back(rmse(batch.pred[t], batch.actual[t]));
    }
    if (target_set == TargetSet::location) {
        double sum = 0.0;
        for (double d : batch.dist) sum += d;
        res.distance_km_mean = sum / static_cast<double>(batch.dist.size());
    }
    return res;
}

}  // namespace

SlidingEvalResult sliding_eval(const CycloneTrack& track, const TrainedModel& model,
                               int window_length) {
    const auto& ids = model.metadata.training_cyclone_ids;
    const bool seen = std::find(ids.begin(), ids.end(), track.cyclone_id) != ids.end();
    const WindowPredictor predictor = [&model](const std::vector<WindowSample>& windows) {
        return predict_batch(model, windows);
    };
    return sliding_eval_impl(track, model.config.target_set, window_length, predictor, seen);
}

SlidingEvalResult sliding_eval_with(const CycloneTrack& track, TargetSet target_set,
                                    int window_length, const WindowPredictor& predictor) {
    return sliding_eval_impl(track, target_set, window_length, predictor, false);
}

void write_metric_report_json(std::ostream& out, const MetricReport& report) {
    json j;
    j["model"] = report.model_label;
    j["target_set"] = target_set_name(report.target_set);
    j["window_length"] = report.window_length;
    j["k_folds"] = report.k;
    j["seed"] = report.seed;
    j["dataset_size"] = report.dataset_size;
    j["target_labels"] = report.target_labels;
    json folds = json::array();
    for (const auto& f : report.folds) {
        json jf;
        jf["fold"] = f.fold;
        jf["train_samples"] = f.train_samples;
        jf["test_samples"] = f.test_samples;
        jf["mae"] = f.mae;
        jf["rmse"] = f.rmse;
        if (f.distance_km) jf["distance_km"] = *f.distance_km;
        folds.push_back(jf);
    }
    j["folds"] = folds;
    json agg;
    for (std::size_t t = 0; t < report.target_labels.size(); ++t) {
        agg[report.target_labels[t]] = {{"mae", report.mae[t].mean},
                                        {"mae_std", report.mae[t].std},
                                        {"rmse", report.rmse[t].mean},
                                        {"rmse_std", report.rmse[t].std}};
    }
    if (report.distance_km)
        agg["distance_km"] = {{"mean", report.distance_km->mean},
                              {"std", report.distance_km->std}};
    j["aggregate"] = agg;
    out << j.dump(2) << '\n';
}

void print_metric_report(std::ostream& out, const MetricReport& report) {
    char buf[128];
    out << "model " << report.model_label << "  T=" << report.window_length
        << "  folds=" << report.k << "  seed=" << report.seed
        << "  test-samples=" << report.dataset_size << "\n";
    std::snprintf(buf, sizeof(buf), "  %-12s %18s %18s\n", "metric",
                  report.target_labels[0].c_str(), report.target_labels[1].c_str());
    out << buf;
    const auto line = [&](const char* name, const std::vector<MetricAggregate>& m) {
        std::snprintf(buf, sizeof(buf), "  %-12s %9.3f ± %-7.3f %9.3f ± %-7.3f\n", name,
                      m[0].mean, m[0].std, m[1].mean, m[1].std);
        out << buf;
    };
    line("MAE", report.mae);
    line("RMSE", report.rmse);
    if (report.distance_km) {
        std::snprintf(buf, sizeof(buf), "  %-12s %9.1f ± %-7.2f km\n", "distance",
                      report.distance_km->mean, report.distance_km->std);
        out << buf;
    }
}

void write_trace_csv(std::ostream& out, const SlidingEvalResult& result) {
    out << "k,hour_of_prediction";
    for (const auto& label : result.target_labels)
        out << ",predicted_" << label << ",actual_" << label;
    out << '\n';
    char buf[64];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        out << ',' << buf;
    };
    for (const auto& row : result.rows) {
        out << row.k;
        put(row.hour_of_prediction);
        for (int t = 0; t < 2; ++t) {
            put(row.predicted(t));
            put(row.actual(t));
        }
        out << '\n';
    }
}

}  // namespace tclf
