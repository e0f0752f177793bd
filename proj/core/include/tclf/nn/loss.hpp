#ifndef TCLF_NN_LOSS_HPP
#define TCLF_NN_LOSS_HPP

#include <Eigen/Core>

namespace tclf::nn {

struct Loss {
    double value;
    Eigen::MatrixXd grad;  // d(loss)/d(pred), same shape as pred
};

// MSE = (1/n) sum (y_i - pred_i)^2 over all elements; gradient
// 2 (pred - y) / n. Throws InvalidInput on shape mismatch or empty input.
Loss mse_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target);
Loss mse_loss_batch(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);

}  // namespace tclf::nn

#endif
