#ifndef TCLF_NN_ADAM_HPP
#define TCLF_NN_ADAM_HPP

#include <vector>

#include "tclf/nn/layers.hpp"

namespace tclf::nn {

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Adam with bias correction. Moment accumulators are shaped on the first
// step and stay aligned with the parameter list order.
class AdamState {
public:
    explicit AdamState(AdamConfig config = {}) : config_(config) {}

    const AdamConfig& config() const { return config_; }
    long step_count() const { return step_; }

    // One update over all parameters from their accumulated gradients.
    // Throws TrainingFault on a non-finite gradient.
    void step(const std::vector<Parameter*>& params);

private:
    AdamConfig config_;
    long step_ = 0;
    std::vector<Eigen::ArrayXXd> m_, v_;
};

inline void adam_step(AdamState& state, const std::vector<Parameter*>& params) {
    state.step(params);
}

}  // namespace tclf::nn

#endif
