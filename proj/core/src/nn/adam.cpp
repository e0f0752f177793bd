#include "tclf/nn/adam.hpp"

#include <cmath>

#include "tclf/errors.hpp"

namespace tclf::nn {

void AdamState::step(const std::vector<Parameter*>& params) {
    if (m_.empty()) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (const Parameter* p : params) {
            m_.push_back(Eigen::ArrayXXd::Zero(p->value.rows(), p->value.cols()));
            v_.push_back(Eigen::ArrayXXd::Zero(p->value.rows(), p->value.cols()));
        }
    }
    if (m_.size() != params.size())
        throw ConfigError("adam_step: parameter list changed size");

    ++step_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter& p = *params[i];
        if (p.grad.rows() != m_[i].rows() || p.grad.cols() != m_[i].cols())
            throw ConfigError("adam_step: parameter '" + p.name + "' changed shape");
        if (!p.grad.allFinite())
            throw TrainingFault("adam_step: non-finite gradient in parameter '" + p.name + "'");
        const Eigen::ArrayXXd g = p.grad.array();
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g.square();
        const Eigen::ArrayXXd m_hat = m_[i] / bc1;
        const Eigen::ArrayXXd v_hat = v_[i] / bc2;
        p.value.array() -= config_.learning_rate * m_hat / (v_hat.sqrt() + config_.epsilon);
    }
}

}  // namespace tclf::nn
