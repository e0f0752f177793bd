#include "tclf/nn/activation.hpp"

#include <cmath>

#include "tclf/errors.hpp"

namespace tclf::nn {
namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

void validate_activation(const ActivationSpec& spec) {
    if (spec.kind == ActKind::swish && !(spec.beta > 0.0))
        throw ConfigError("swish activation requires beta > 0, got " +
                          std::to_string(spec.beta));
}

double activation_eval(const ActivationSpec& spec, double x) {
    switch (spec.kind) {
        case ActKind::linear: return x;
        case ActKind::sigmoid: return sigmoid(x);
        case ActKind::tanh: return std::tanh(x);
        case ActKind::relu: return x > 0.0 ? x : 0.0;
        case ActKind::swish: return x * sigmoid(spec.beta * x);
    }
    throw ConfigError("unknown activation kind");
}

double activation_grad(const ActivationSpec& spec, double x) {
    switch (spec.kind) {
        case ActKind::linear: return 1.0;
        case ActKind::sigmoid: {
            const double s = sigmoid(x);
            return s * (1.0 - s);
        }
        case ActKind::tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case ActKind::relu: return x > 0.0 ? 1.0 : 0.0;
        case ActKind::swish: {
            const double s = sigmoid(spec.beta * x);
            return s + spec.beta * x * s * (1.0 - s);
        }
    }
    throw ConfigError("unknown activation kind");
}

Eigen::MatrixXd act_eval(const ActivationSpec& spec, const Eigen::MatrixXd& x) {
    return x.unaryExpr([&](double v) { return activation_eval(spec, v); });
}

Eigen::MatrixXd act_grad(const ActivationSpec& spec, const Eigen::MatrixXd& x) {
    return x.unaryExpr([&](double v) { return activation_grad(spec, v); });
}

std::string act_kind_name(ActKind kind) {
    switch (kind) {
        case ActKind::linear: return "linear";
        case ActKind::sigmoid: return "sigmoid";
        case ActKind::tanh: return "tanh";
        case ActKind::relu: return "relu";
        case ActKind::swish: return "swish";
    }
    throw ConfigError("unknown activation kind");
}

ActKind act_kind_from_name(const std::string& name) {
    if (name == "linear") return ActKind::linear;
    if (name == "sigmoid") return ActKind::sigmoid;
    if (name == "tanh") return ActKind::tanh;
    if (name == "relu") return ActKind::relu;
    if (name == "swish") return ActKind::swish;
    throw ConfigError("unknown activation kind '" + name + "'");
}

}  // namespace tclf::nn
