#include "tclf/nn/network.hpp"

#include <cmath>

#include "tclf/errors.hpp"
#include "tclf/rng.hpp"

namespace tclf::nn {

void validate_stack(const std::vector<LayerSpec>& specs, int sequence_length, int input_width) {
    if (specs.empty()) throw ConfigError("stack: no layers");
    if (sequence_length < 1) throw ConfigError("stack: sequence length must be >= 1");
    if (input_width < 1) throw ConfigError("stack: input width must be >= 1");

    const auto is_recurrent = [](LayerKind k) { return k != LayerKind::dense; };

    int last_recurrent = -1;
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (is_recurrent(specs[i].kind)) last_recurrent = static_cast<int>(i);
    for (int i = 0; i < last_recurrent; ++i)
        if (!is_recurrent(specs[i].kind))
            throw ConfigError("stack: dense layer before a recurrent layer (layer " +
                              std::to_string(i) + ")");

    int width = input_width;
    int steps = sequence_length;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const LayerSpec& s = specs[i];
        if (s.input_size < 1 || s.output_size < 1)
            throw ConfigError("stack: layer " + std::to_string(i) + " sizes must be >= 1");
        validate_activation(s.activation);
        if (is_recurrent(s.kind)) {
            if (s.input_size != width)
                throw ConfigError("stack: layer " + std::to_string(i) + " expects width " +
                                  std::to_string(s.input_size) + " but receives " +
                                  std::to_string(width));
            if (static_cast<int>(i) != last_recurrent && !s.returns_sequence)
                throw ConfigError("stack: recurrent layer " + std::to_string(i) +
                                  " must return a sequence (another recurrent layer follows)");
            width = emitted_width(s);
            if (!s.returns_sequence) steps = 1;
        } else {
            const int incoming = steps * width;
            if (s.input_size != incoming)
                throw ConfigError("stack: dense layer " + std::to_string(i) + " expects width " +
                                  std::to_string(s.input_size) + " but receives " +
                                  std::to_string(incoming));
            width = s.output_size;
            steps = 1;
        }
    }

    const LayerSpec& last = specs.back();
    if (last.kind != LayerKind::dense || last.activation.kind != ActKind::linear)
        throw ConfigError("stack: final layer must be dense with linear activation");
}

Network::Network(std::vector<LayerSpec> specs, int sequence_length, int input_width)
    : specs_(std::move(specs)), sequence_length_(sequence_length), input_width_(input_width) {
    validate_stack(specs_, sequence_length_, input_width_);
    layers_.reserve(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i)
        layers_.push_back(make_layer(specs_[i], "l" + std::to_string(i)));
    output_width_ = specs_.back().output_size;
}

Eigen::MatrixXd Network::forward(const Sequence& input) {
    if (static_cast<int>(input.size()) != sequence_length_)
        throw InvalidInput("forward: expected " + std::to_string(sequence_length_) +
                           " steps, got " + std::to_string(input.size()));
    const Eigen::Index batch = input.empty() ? 0 : input[0].rows();
    for (const auto& step : input)
        if (step.rows() != batch || step.cols() != input_width_)
            throw InvalidInput("forward: inconsistent input step shape");

    Sequence cur = input;
    for (auto& layer : layers_) cur = layer->forward(cur);
    return cur[0];
}

Sequence Network::backward(const Eigen::MatrixXd& d_output) {
    Sequence grad{d_output};
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) grad = (*it)->backward(grad);
    return grad;
}

std::vector<Parameter*> Network::parameters() {
    std::vector<Parameter*> out;
    for (auto& layer : layers_) layer->collect_params(out);
    return out;
}

void Network::zero_grad() {
    for (auto& layer : layers_) layer->zero_grad();
}

void Network::init_params(std::uint64_t seed) {
    Rng rng(seed);
    for (Parameter* p : parameters()) {
        switch (p->init) {
            case InitKind::zeros:
                p->value.setZero();
                break;
            case InitKind::ones:
                p->value.setOnes();
                break;
            case InitKind::glorot_uniform: {
                const double fan_in = static_cast<double>(p->value.cols());
                const double fan_out = static_cast<double>(p->value.rows());
                const double limit = std::sqrt(6.0 / (fan_in + fan_out));
                for (Eigen::Index r = 0; r < p->value.rows(); ++r)
                    for (Eigen::Index c = 0; c < p->value.cols(); ++c)
                        p->value(r, c) = rng.uniform(-limit, limit);
                break;
            }
        }
        p->grad.setZero();
    }
}

double clip_gradient_norm(const std::vector<Parameter*>& params, double max_norm) {
    double sq = 0.0;
    for (const Parameter* p : params) sq += p->grad.squaredNorm();
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (Parameter* p : const_cast<std::vector<Parameter*>&>(params)) p->grad *= scale;
    }
    return norm;
}

}  // namespace tclf::nn
