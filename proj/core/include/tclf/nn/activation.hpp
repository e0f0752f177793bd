#ifndef TCLF_NN_ACTIVATION_HPP
#define TCLF_NN_ACTIVATION_HPP

#include <Eigen/Core>
#include <string>

namespace tclf::nn {

enum class ActKind { linear, sigmoid, tanh, relu, swish };

// Swish carries its beta (Swish(beta*x) = x * sigmoid(beta*x)); the other
// kinds ignore it.
struct ActivationSpec {
    ActKind kind = ActKind::tanh;
    double beta = 1.0;
};

// Throws ConfigError when kind == swish and beta is not positive.
void validate_activation(const ActivationSpec& spec);

double activation_eval(const ActivationSpec& spec, double x);
// Derivative with respect to the pre-activation x.
double activation_grad(const ActivationSpec& spec, double x);

Eigen::MatrixXd act_eval(const ActivationSpec& spec, const Eigen::MatrixXd& x);
Eigen::MatrixXd act_grad(const ActivationSpec& spec, const Eigen::MatrixXd& x);

std::string act_kind_name(ActKind kind);
ActKind act_kind_from_name(const std::string& name);

inline ActivationSpec linear_act() { return {ActKind::linear, 1.0}; }
inline ActivationSpec swish_act(double beta) { return {ActKind::swish, beta}; }

}  // namespace tclf::nn

#endif
