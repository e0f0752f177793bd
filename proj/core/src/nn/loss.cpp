#include "tclf/nn/loss.hpp"

#include <string>

#include "tclf/errors.hpp"

namespace tclf::nn {

Loss mse_loss_batch(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw InvalidInput("mse_loss: shape mismatch (" + std::to_string(pred.rows()) + "x" +
                           std::to_string(pred.cols()) + " vs " + std::to_string(target.rows()) +
                           "x" + std::to_string(target.cols()) + ")");
    const double n = static_cast<double>(pred.size());
    if (n == 0.0) throw InvalidInput("mse_loss: empty input");
    const Eigen::MatrixXd diff = pred - target;
    Loss out;
    out.value = diff.squaredNorm() / n;
    out.grad = (2.0 / n) * diff;
    return out;
}

Loss mse_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    return mse_loss_batch(pred, target);
}

}  // namespace tclf::nn
