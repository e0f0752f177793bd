#ifndef TCLF_NN_LAYERS_HPP
#define TCLF_NN_LAYERS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tclf/nn/activation.hpp"

namespace tclf::nn {

// A batched sequence, time-major: steps.size() == T, each step batch x width.
// Layers that emit a single vector per sample return a one-step sequence.
using Sequence = std::vector<Eigen::MatrixXd>;

enum class InitKind { glorot_uniform, zeros, ones };

struct Parameter {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    InitKind init = InitKind::glorot_uniform;

    Parameter(std::string n, Eigen::Index rows, Eigen::Index cols, InitKind k)
        : name(std::move(n)),
          value(Eigen::MatrixXd::Zero(rows, cols)),
          grad(Eigen::MatrixXd::Zero(rows, cols)),
          init(k) {}
};

enum class LayerKind { dense, lstm, bilstm, gru };

std::string layer_kind_name(LayerKind kind);
LayerKind layer_kind_from_name(const std::string& name);

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    int input_size = 0;
    int output_size = 0;  // per direction for bilstm; emitted width is doubled
    bool returns_sequence = false;
    ActivationSpec activation;  // dense: elementwise; recurrent: candidate/cell output
};

// Emitted feature width (2x for bilstm).
int emitted_width(const LayerSpec& spec);

// Layers cache forward intermediates and consume them in backward, so one
// instance must not run interleaved forward passes. Parameter gradients
// accumulate until zero_grad.
class Layer {
public:
    explicit Layer(LayerSpec spec) : spec_(std::move(spec)) {}
    virtual ~Layer() = default;
    Layer(const Layer&) = delete;
    Layer& operator=(const Layer&) = delete;

    const LayerSpec& spec() const { return spec_; }

    virtual Sequence forward(const Sequence& input) = 0;
    // Upstream gradient has the shape of this layer's output; returns the
    // gradient with respect to the input sequence.
    virtual Sequence backward(const Sequence& upstream) = 0;

    virtual void collect_params(std::vector<Parameter*>& out) = 0;

    Parameter* find_param(const std::string& name);
    void zero_grad();

protected:
    LayerSpec spec_;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::string& name_prefix);

class DenseLayer : public Layer {
public:
    DenseLayer(LayerSpec spec, const std::string& prefix);
    Sequence forward(const Sequence& input) override;
    Sequence backward(const Sequence& upstream) override;
    void collect_params(std::vector<Parameter*>& out) override;

private:
    Parameter w_;  // output_size x input_size
    Parameter b_;  // output_size x 1
    Eigen::MatrixXd x_, z_;
    std::vector<Eigen::Index> split_;  // step widths when the input was flattened
};

class LstmLayer : public Layer {
public:
    LstmLayer(LayerSpec spec, const std::string& prefix);
    Sequence forward(const Sequence& input) override;
    Sequence backward(const Sequence& upstream) override;
    void collect_params(std::vector<Parameter*>& out) override;

    // One cell update h_t, c_t from x_t and the previous state; the contract
    // checked by the scalar hand oracles. Gates are sigmoid, candidate and
    // cell output use the layer activation.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> cell_step(const Eigen::VectorXd& x,
                                                          const Eigen::VectorXd& h_prev,
                                                          const Eigen::VectorXd& c_prev) const;

private:
    friend class BiLstmLayer;
    enum Gate { kIn = 0, kForget = 1, kOut = 2, kCand = 3 };
    Parameter wx_[4];  // H x input_size
    Parameter wh_[4];  // H x H
    Parameter b_[4];   // H x 1
    // forward caches
    Sequence xs_, gates_[4], zg_, cs_, hs_, act_c_;
};

class GruLayer : public Layer {
public:
    GruLayer(LayerSpec spec, const std::string& prefix);
    Sequence forward(const Sequence& input) override;
    Sequence backward(const Sequence& upstream) override;
    void collect_params(std::vector<Parameter*>& out) override;

    // h_t from x_t and h_{t-1}: update/reset gates are sigmoid, the candidate
    // uses the layer activation (tanh in the standard recurrence).
    Eigen::VectorXd cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev) const;

private:
    Parameter wx_z_, wh_z_, b_z_;
    Parameter wx_r_, wh_r_, b_r_;
    Parameter wx_g_, wh_g_, b_g_;
    Sequence xs_, zs_, rs_, gs_, zg_, hs_, rh_;
};

// Two LSTM passes, one over the input and one over the reversed input. With
// returns_sequence the per-position outputs are concatenated
// [forward_t | backward_t]; otherwise the two final hidden states are
// concatenated.
class BiLstmLayer : public Layer {
public:
    BiLstmLayer(LayerSpec spec, const std::string& prefix);
    Sequence forward(const Sequence& input) override;
    Sequence backward(const Sequence& upstream) override;
    void collect_params(std::vector<Parameter*>& out) override;

private:
    LstmLayer fw_, bw_;
};

}  // namespace tclf::nn

#endif
