#ifndef TCLF_TESTS_HELPERS_HPP
#define TCLF_TESTS_HELPERS_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "tclf/ingest.hpp"
#include "tclf/nn/loss.hpp"
#include "tclf/nn/network.hpp"
#include "tclf/rng.hpp"
#include "tclf/synth.hpp"

namespace tclf::testing {

// ------------------------------------------------------------------
// Finite-difference gradient oracle, independent of the backward pass:
// perturbs every parameter element and compares the analytic gradient of
// the batch MSE against the central difference.

struct GradCheck {
    double max_rel_err = 0.0;
    std::string worst_param;
    int checked = 0;
};

inline GradCheck gradient_check(nn::Network& net, const nn::Sequence& input,
                                const Eigen::MatrixXd& target, double h = 1e-5) {
    const auto loss_at = [&]() {
        return nn::mse_loss_batch(net.forward(input), target).value;
    };

    net.zero_grad();
    const nn::Loss loss = nn::mse_loss_batch(net.forward(input), target);
    net.backward(loss.grad);

    GradCheck res;
    for (nn::Parameter* p : net.parameters()) {
        const Eigen::MatrixXd analytic = p->grad;
        for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
            for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
                const double saved = p->value(r, c);
                p->value(r, c) = saved + h;
                const double up = loss_at();
                p->value(r, c) = saved - h;
                const double down = loss_at();
                p->value(r, c) = saved;
                const double fd = (up - down) / (2.0 * h);
                const double g = analytic(r, c);
                const double rel =
                    std::abs(fd - g) / std::max(std::abs(fd) + std::abs(g), 1e-6);
                ++res.checked;
                if (rel > res.max_rel_err) {
                    res.max_rel_err = rel;
                    res.worst_param = p->name;
                }
            }
        }
    }
    return res;
}

// Random small stacks cycling through every layer kind; widths <= 8.
struct RandomStack {
    std::vector<nn::LayerSpec> specs;
    int seq_len;
    int input_width;
};

inline RandomStack random_stack(Rng& rng, int index) {
    RandomStack rs;
    rs.seq_len = 2 + static_cast<int>(rng.below(4));     // 2..5
    rs.input_width = 2 + static_cast<int>(rng.below(5)); // 2..6

    const nn::ActivationSpec acts[] = {{nn::ActKind::tanh, 1.0},
                                       {nn::ActKind::sigmoid, 1.0},
                                       {nn::ActKind::swish, 2.0},
                                       {nn::ActKind::relu, 1.0}};
    const nn::LayerKind kinds[] = {nn::LayerKind::lstm, nn::LayerKind::bilstm,
                                   nn::LayerKind::gru};

    int width = rs.input_width;
    int steps = rs.seq_len;
    const int n_rec = (index % 4 == 3) ? 0 : 1 + static_cast<int>(rng.below(2));
    for (int i = 0; i < n_rec; ++i) {
        nn::LayerSpec s;
        s.kind = kinds[(index + i) % 3];
        s.input_size = width;
        s.output_size = 2 + static_cast<int>(rng.below(7));  // 2..8
        s.returns_sequence = (i + 1 < n_rec) || rng.below(2) == 0;
        s.activation = acts[rng.below(4)];
        rs.specs.push_back(s);
        width = nn::emitted_width(s);
        if (!s.returns_sequence) steps = 1;
    }
    if (rng.below(2) == 0 || n_rec == 0) {
        nn::LayerSpec hidden;
        hidden.kind = nn::LayerKind::dense;
        hidden.input_size = steps * width;
        hidden.output_size = 2 + static_cast<int>(rng.below(7));
        hidden.activation = acts[rng.below(4)];
        rs.specs.push_back(hidden);
        width = hidden.output_size;
        steps = 1;
    }
    nn::LayerSpec out;
    out.kind = nn::LayerKind::dense;
    out.input_size = steps * width;
    out.output_size = 1 + static_cast<int>(rng.below(3));
    out.activation = nn::linear_act();
    rs.specs.push_back(out);
    return rs;
}

inline nn::Sequence random_input(Rng& rng, int seq_len, int width, int batch) {
    nn::Sequence input(seq_len, Eigen::MatrixXd(batch, width));
    for (auto& step : input)
        for (Eigen::Index r = 0; r < step.rows(); ++r)
            for (Eigen::Index c = 0; c < step.cols(); ++c) step(r, c) = rng.uniform(-1.5, 1.5);
    return input;
}

// ------------------------------------------------------------------
// Deterministic synthetic corpora via the generator + ingest pipeline.

inline std::vector<CycloneTrack> synth_tracks(int n, std::uint64_t seed) {
    SynthOptions opt;
    opt.n_cyclones = n;
    opt.seed = seed;
    const auto records = synth_best_track(opt);
    std::ostringstream csv;
    write_best_track_csv(csv, records);
    std::istringstream in(csv.str());
    IngestSummary summary;
    return ingest_tracks(in, nullptr, summary);
}

}  // namespace tclf::testing

#endif
