#ifndef TCLF_NN_NETWORK_HPP
#define TCLF_NN_NETWORK_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "tclf/nn/layers.hpp"

namespace tclf::nn {

// A validated regression stack: zero or more recurrent layers followed by
// dense layers, ending in a linear dense output. The chain is checked
// against the expected sequence length and input width at construction,
// before any arithmetic.
class Network {
public:
    Network(std::vector<LayerSpec> specs, int sequence_length, int input_width);

    // input: time-major batch, sequence_length steps of batch x input_width.
    // Returns batch x output_width.
    Eigen::MatrixXd forward(const Sequence& input);

    // Backpropagates through the cached forward pass, accumulating parameter
    // gradients; returns the gradient with respect to the input.
    Sequence backward(const Eigen::MatrixXd& d_output);

    std::vector<Parameter*> parameters();
    void zero_grad();

    // Deterministic per seed: glorot-uniform kernels, zero biases, LSTM
    // forget-gate biases of 1.
    void init_params(std::uint64_t seed);

    int sequence_length() const { return sequence_length_; }
    int input_width() const { return input_width_; }
    int output_width() const { return output_width_; }
    const std::vector<LayerSpec>& specs() const { return specs_; }

private:
    std::vector<LayerSpec> specs_;
    std::vector<std::unique_ptr<Layer>> layers_;
    int sequence_length_;
    int input_width_;
    int output_width_ = 0;
};

// Validates a stack without building it; throws ConfigError on problems.
void validate_stack(const std::vector<LayerSpec>& specs, int sequence_length, int input_width);

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the pre-clip norm. No-op when max_norm <= 0.
double clip_gradient_norm(const std::vector<Parameter*>& params, double max_norm);

}  // namespace tclf::nn

#endif
