#include "tclf/nn/layers.hpp"

#include <cmath>

#include "tclf/errors.hpp"

namespace tclf::nn {
namespace {

Eigen::MatrixXd sigmoid_m(const Eigen::MatrixXd& x) {
    return x.unaryExpr([](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
    });
}

// Derivative of sigmoid from its post-activation value.
Eigen::MatrixXd sigmoid_grad_from_post(const Eigen::MatrixXd& s) {
    return (s.array() * (1.0 - s.array())).matrix();
}

void check_step_width(const Eigen::MatrixXd& step, int expected, const char* who) {
    if (step.cols() != expected)
        throw ConfigError(std::string(who) + ": expected input width " +
                          std::to_string(expected) + ", got " + std::to_string(step.cols()));
}

void validate_sizes(const LayerSpec& spec, const char* who) {
    if (spec.input_size < 1 || spec.output_size < 1)
        throw ConfigError(std::string(who) + ": layer sizes must be >= 1");
    validate_activation(spec.activation);
}

}  // namespace

std::string layer_kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::dense: return "dense";
        case LayerKind::lstm: return "lstm";
        case LayerKind::bilstm: return "bilstm";
        case LayerKind::gru: return "gru";
    }
    throw ConfigError("unknown layer kind");
}

LayerKind layer_kind_from_name(const std::string& name) {
    if (name == "dense") return LayerKind::dense;
    if (name == "lstm") return LayerKind::lstm;
    if (name == "bilstm") return LayerKind::bilstm;
    if (name == "gru") return LayerKind::gru;
    throw ConfigError("unknown layer kind '" + name + "'");
}

int emitted_width(const LayerSpec& spec) {
    return spec.kind == LayerKind::bilstm ? 2 * spec.output_size : spec.output_size;
}

Parameter* Layer::find_param(const std::string& name) {
    std::vector<Parameter*> all;
    collect_params(all);
    for (Parameter* p : all)
        if (p->name == name) return p;
    return nullptr;
}

void Layer::zero_grad() {
    std::vector<Parameter*> all;
    collect_params(all);
    for (Parameter* p : all) p->grad.setZero();
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::string& name_prefix) {
    switch (spec.kind) {
        case LayerKind::dense: return std::make_unique<DenseLayer>(spec, name_prefix);
        case LayerKind::lstm: return std::make_unique<LstmLayer>(spec, name_prefix);
        case LayerKind::bilstm: return std::make_unique<BiLstmLayer>(spec, name_prefix);
        case LayerKind::gru: return std::make_unique<GruLayer>(spec, name_prefix);
    }
    throw ConfigError("unknown layer kind");
}

// ---------------------------------------------------------------- dense

DenseLayer::DenseLayer(LayerSpec spec, const std::string& prefix)
    : Layer(std::move(spec)),
      w_(prefix + ".w", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
      b_(prefix + ".b", spec_.output_size, 1, InitKind::zeros) {
    validate_sizes(spec_, "dense");
}

Sequence DenseLayer::forward(const Sequence& input) {
    if (input.empty()) throw ConfigError("dense: empty input sequence");
    split_.clear();
    if (input.size() == 1) {
        x_ = input[0];
    } else {
        // A multi-step input is flattened per sample, time-major.
        Eigen::Index total = 0;
        for (const auto& step : input) total += step.cols();
        x_.resize(input[0].rows(), total);
        Eigen::Index at = 0;
        for (const auto& step : input) {
            x_.middleCols(at, step.cols()) = step;
            split_.push_back(step.cols());
            at += step.cols();
        }
    }
    check_step_width(x_, spec_.input_size, "dense");
    z_.noalias() = x_ * w_.value.transpose();
    z_.rowwise() += b_.value.col(0).transpose();
    return {act_eval(spec_.activation, z_)};
}

Sequence DenseLayer::backward(const Sequence& upstream) {
    if (upstream.size() != 1)
        throw InvalidInput("dense backward: expected a single-step upstream gradient");
    const Eigen::MatrixXd dz =
        (upstream[0].array() * act_grad(spec_.activation, z_).array()).matrix();
    w_.grad.noalias() += dz.transpose() * x_;
    b_.grad += dz.colwise().sum().transpose();
    Eigen::MatrixXd dx = dz * w_.value;
    if (split_.empty()) return {std::move(dx)};
    Sequence out;
    Eigen::Index at = 0;
    for (const Eigen::Index width : split_) {
        out.push_back(dx.middleCols(at, width));
        at += width;
    }
    return out;
}

void DenseLayer::collect_params(std::vector<Parameter*>& out) {
    out.push_back(&w_);
    out.push_back(&b_);
}

// ---------------------------------------------------------------- lstm

LstmLayer::LstmLayer(LayerSpec spec, const std::string& prefix)
    : Layer(std::move(spec)),
      wx_{Parameter(prefix + ".wx_i", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wx_f", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wx_o", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wx_g", spec_.output_size, spec_.input_size, InitKind::glorot_uniform)},
      wh_{Parameter(prefix + ".wh_i", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wh_f", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wh_o", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
          Parameter(prefix + ".wh_g", spec_.output_size, spec_.output_size, InitKind::glorot_uniform)},
      b_{Parameter(prefix + ".b_i", spec_.output_size, 1, InitKind::zeros),
         Parameter(prefix + ".b_f", spec_.output_size, 1, InitKind::ones),
         Parameter(prefix + ".b_o", spec_.output_size, 1, InitKind::zeros),
         Parameter(prefix + ".b_g", spec_.output_size, 1, InitKind::zeros)} {
    validate_sizes(spec_, "lstm");
}

Sequence LstmLayer::forward(const Sequence& input) {
    if (input.empty()) throw ConfigError("lstm: empty input sequence");
    const std::size_t t_len = input.size();
    const Eigen::Index batch = input[0].rows();
    const int h = spec_.output_size;

    xs_ = input;
    for (int q = 0; q < 4; ++q) gates_[q].assign(t_len, {});
    zg_.assign(t_len, {});
    act_c_.assign(t_len, {});
    cs_.assign(t_len + 1, Eigen::MatrixXd::Zero(batch, h));
    hs_.assign(t_len + 1, Eigen::MatrixXd::Zero(batch, h));

    for (std::size_t t = 0; t < t_len; ++t) {
        check_step_width(input[t], spec_.input_size, "lstm");
        const Eigen::MatrixXd& h_prev = hs_[t];
        Eigen::MatrixXd z[4];
        for (int q = 0; q < 4; ++q) {
            z[q].noalias() = input[t] * wx_[q].value.transpose();
            z[q].noalias() += h_prev * wh_[q].value.transpose();
            z[q].rowwise() += b_[q].value.col(0).transpose();
        }
        gates_[kIn][t] = sigmoid_m(z[kIn]);
        gates_[kForget][t] = sigmoid_m(z[kForget]);
        gates_[kOut][t] = sigmoid_m(z[kOut]);
        zg_[t] = std::move(z[kCand]);
        gates_[kCand][t] = act_eval(spec_.activation, zg_[t]);

        cs_[t + 1] = (gates_[kForget][t].array() * cs_[t].array() +
                      gates_[kIn][t].array() * gates_[kCand][t].array())
                         .matrix();
        act_c_[t] = act_eval(spec_.activation, cs_[t + 1]);
        hs_[t + 1] = (gates_[kOut][t].array() * act_c_[t].array()).matrix();
    }

    if (spec_.returns_sequence) return Sequence(hs_.begin() + 1, hs_.end());
    return {hs_.back()};
}

Sequence LstmLayer::backward(const Sequence& upstream) {
    const std::size_t t_len = xs_.size();
    if (t_len == 0) throw InvalidInput("lstm backward: no cached forward pass");
    if (spec_.returns_sequence ? upstream.size() != t_len : upstream.size() != 1)
        throw InvalidInput("lstm backward: upstream step count mismatch");

    const Eigen::Index batch = xs_[0].rows();
    const int h = spec_.output_size;
    Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(batch, h);
    Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(batch, h);
    Sequence dx(t_len);

    for (std::size_t ti = t_len; ti-- > 0;) {
        Eigen::MatrixXd dh = dh_next;
        if (spec_.returns_sequence) dh += upstream[ti];
        else if (ti + 1 == t_len) dh += upstream[0];

        const Eigen::MatrixXd& gi = gates_[kIn][ti];
        const Eigen::MatrixXd& gf = gates_[kForget][ti];
        const Eigen::MatrixXd& go = gates_[kOut][ti];
        const Eigen::MatrixXd& gc = gates_[kCand][ti];

        const Eigen::MatrixXd dzo =
            (dh.array() * act_c_[ti].array() * sigmoid_grad_from_post(go).array()).matrix();
        const Eigen::MatrixXd dc =
            (dh.array() * go.array() * act_grad(spec_.activation, cs_[ti + 1]).array()).matrix() +
            dc_next;
        const Eigen::MatrixXd dzf =
            (dc.array() * cs_[ti].array() * sigmoid_grad_from_post(gf).array()).matrix();
        const Eigen::MatrixXd dzi =
            (dc.array() * gc.array() * sigmoid_grad_from_post(gi).array()).matrix();
        const Eigen::MatrixXd dzg =
            (dc.array() * gi.array() * act_grad(spec_.activation, zg_[ti]).array()).matrix();

        const Eigen::MatrixXd* dz[4] = {&dzi, &dzf, &dzo, &dzg};
        for (int q = 0; q < 4; ++q) {
            wx_[q].grad.noalias() += dz[q]->transpose() * xs_[ti];
            wh_[q].grad.noalias() += dz[q]->transpose() * hs_[ti];
            b_[q].grad += dz[q]->colwise().sum().transpose();
        }

        dx[ti].noalias() = dzi * wx_[kIn].value;
        dx[ti].noalias() += dzf * wx_[kForget].value;
        dx[ti].noalias() += dzo * wx_[kOut].value;
        dx[ti].noalias() += dzg * wx_[kCand].value;

        dh_next.noalias() = dzi * wh_[kIn].value;
        dh_next.noalias() += dzf * wh_[kForget].value;
        dh_next.noalias() += dzo * wh_[kOut].value;
        dh_next.noalias() += dzg * wh_[kCand].value;
        dc_next = (dc.array() * gf.array()).matrix();
    }
    return dx;
}

void LstmLayer::collect_params(std::vector<Parameter*>& out) {
    for (int q = 0; q < 4; ++q) {
        out.push_back(&wx_[q]);
        out.push_back(&wh_[q]);
        out.push_back(&b_[q]);
    }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> LstmLayer::cell_step(
    const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev) const {
    if (x.size() != spec_.input_size || h_prev.size() != spec_.output_size ||
        c_prev.size() != spec_.output_size)
        throw ConfigError("lstm cell_step: dimension mismatch");
    const auto pre = [&](int q) -> Eigen::VectorXd {
        return wx_[q].value * x + wh_[q].value * h_prev + b_[q].value.col(0);
    };
    const Eigen::VectorXd i = sigmoid_m(pre(kIn));
    const Eigen::VectorXd f = sigmoid_m(pre(kForget));
    const Eigen::VectorXd o = sigmoid_m(pre(kOut));
    const Eigen::VectorXd g = act_eval(spec_.activation, pre(kCand));
    const Eigen::VectorXd c = (f.array() * c_prev.array() + i.array() * g.array()).matrix();
    const Eigen::VectorXd h = (o.array() * act_eval(spec_.activation, c).array()).matrix();
    return {h, c};
}

// ---------------------------------------------------------------- gru

GruLayer::GruLayer(LayerSpec spec, const std::string& prefix)
    : Layer(std::move(spec)),
      wx_z_(prefix + ".wx_z", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
      wh_z_(prefix + ".wh_z", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
      b_z_(prefix + ".b_z", spec_.output_size, 1, InitKind::zeros),
      wx_r_(prefix + ".wx_r", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
      wh_r_(prefix + ".wh_r", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
      b_r_(prefix + ".b_r", spec_.output_size, 1, InitKind::zeros),
      wx_g_(prefix + ".wx_g", spec_.output_size, spec_.input_size, InitKind::glorot_uniform),
      wh_g_(prefix + ".wh_g", spec_.output_size, spec_.output_size, InitKind::glorot_uniform),
      b_g_(prefix + ".b_g", spec_.output_size, 1, InitKind::zeros) {
    validate_sizes(spec_, "gru");
}

Sequence GruLayer::forward(const Sequence& input) {
    if (input.empty()) throw ConfigError("gru: empty input sequence");
    const std::size_t t_len = input.size();
    const Eigen::Index batch = input[0].rows();
    const int h = spec_.output_size;

    xs_ = input;
    zs_.assign(t_len, {});
    rs_.assign(t_len, {});
    gs_.assign(t_len, {});
    zg_.assign(t_len, {});
    rh_.assign(t_len, {});
    hs_.assign(t_len + 1, Eigen::MatrixXd::Zero(batch, h));

    for (std::size_t t = 0; t < t_len; ++t) {
        check_step_width(input[t], spec_.input_size, "gru");
        const Eigen::MatrixXd& h_prev = hs_[t];
        Eigen::MatrixXd z_pre = input[t] * wx_z_.value.transpose();
        z_pre.noalias() += h_prev * wh_z_.value.transpose();
        z_pre.rowwise() += b_z_.value.col(0).transpose();
        Eigen::MatrixXd r_pre = input[t] * wx_r_.value.transpose();
        r_pre.noalias() += h_prev * wh_r_.value.transpose();
        r_pre.rowwise() += b_r_.value.col(0).transpose();
        zs_[t] = sigmoid_m(z_pre);
        rs_[t] = sigmoid_m(r_pre);
        rh_[t] = (rs_[t].array() * h_prev.array()).matrix();
        Eigen::MatrixXd g_pre = input[t] * wx_g_.value.transpose();
        g_pre.noalias() += rh_[t] * wh_g_.value.transpose();
        g_pre.rowwise() += b_g_.value.col(0).transpose();
        zg_[t] = std::move(g_pre);
        gs_[t] = act_eval(spec_.activation, zg_[t]);
        hs_[t + 1] = (zs_[t].array() * h_prev.array() +
                      (1.0 - zs_[t].array()) * gs_[t].array())
                         .matrix();
    }

    if (spec_.returns_sequence) return Sequence(hs_.begin() + 1, hs_.end());
    return {hs_.back()};
}

Sequence GruLayer::backward(const Sequence& upstream) {
    const std::size_t t_len = xs_.size();
    if (t_len == 0) throw InvalidInput("gru backward: no cached forward pass");
    if (spec_.returns_sequence ? upstream.size() != t_len : upstream.size() != 1)
        throw InvalidInput("gru backward: upstream step count mismatch");

    const Eigen::Index batch = xs_[0].rows();
    const int h = spec_.output_size;
    Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(batch, h);
    Sequence dx(t_len);

    for (std::size_t ti = t_len; ti-- > 0;) {
        Eigen::MatrixXd dh = dh_next;
        if (spec_.returns_sequence) dh += upstream[ti];
        else if (ti + 1 == t_len) dh += upstream[0];

        const Eigen::MatrixXd& z = zs_[ti];
        const Eigen::MatrixXd& r = rs_[ti];
        const Eigen::MatrixXd& g = gs_[ti];
        const Eigen::MatrixXd& h_prev = hs_[ti];

        const Eigen::MatrixXd dzz =
            (dh.array() * (h_prev.array() - g.array()) * sigmoid_grad_from_post(z).array())
                .matrix();
        const Eigen::MatrixXd dzg = (dh.array() * (1.0 - z.array()) *
                                     act_grad(spec_.activation, zg_[ti]).array())
                                        .matrix();
        const Eigen::MatrixXd drh = dzg * wh_g_.value;
        const Eigen::MatrixXd dzr =
            (drh.array() * h_prev.array() * sigmoid_grad_from_post(r).array()).matrix();

        wx_z_.grad.noalias() += dzz.transpose() * xs_[ti];
        wh_z_.grad.noalias() += dzz.transpose() * h_prev;
        b_z_.grad += dzz.colwise().sum().transpose();
        wx_r_.grad.noalias() += dzr.transpose() * xs_[ti];
        wh_r_.grad.noalias() += dzr.transpose() * h_prev;
        b_r_.grad += dzr.colwise().sum().transpose();
        wx_g_.grad.noalias() += dzg.transpose() * xs_[ti];
        wh_g_.grad.noalias() += dzg.transpose() * rh_[ti];
        b_g_.grad += dzg.colwise().sum().transpose();

        dx[ti].noalias() = dzz * wx_z_.value;
        dx[ti].noalias() += dzr * wx_r_.value;
        dx[ti].noalias() += dzg * wx_g_.value;

        dh_next = (dh.array() * z.array() + drh.array() * r.array()).matrix();
        dh_next.noalias() += dzz * wh_z_.value;
        dh_next.noalias() += dzr * wh_r_.value;
    }
    return dx;
}

void GruLayer::collect_params(std::vector<Parameter*>& out) {
    out.push_back(&wx_z_);
    out.push_back(&wh_z_);
    out.push_back(&b_z_);
    out.push_back(&wx_r_);
    out.push_back(&wh_r_);
    out.push_back(&b_r_);
    out.push_back(&wx_g_);
    out.push_back(&wh_g_);
    out.push_back(&b_g_);
}

Eigen::VectorXd GruLayer::cell_step(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& h_prev) const {
    if (x.size() != spec_.input_size || h_prev.size() != spec_.output_size)
        throw ConfigError("gru cell_step: dimension mismatch");
    const Eigen::VectorXd z =
        sigmoid_m(wx_z_.value * x + wh_z_.value * h_prev + b_z_.value.col(0));
    const Eigen::VectorXd r =
        sigmoid_m(wx_r_.value * x + wh_r_.value * h_prev + b_r_.value.col(0));
    const Eigen::VectorXd rh = (r.array() * h_prev.array()).matrix();
    const Eigen::VectorXd g =
        act_eval(spec_.activation, wx_g_.value * x + wh_g_.value * rh + b_g_.value.col(0));
    return (z.array() * h_prev.array() + (1.0 - z.array()) * g.array()).matrix();
}

// ---------------------------------------------------------------- bilstm

namespace {

LayerSpec half_spec(const LayerSpec& spec) {
    LayerSpec s = spec;
    s.kind = LayerKind::lstm;
    return s;
}

Sequence reversed(const Sequence& in) {
    return Sequence(in.rbegin(), in.rend());
}

}  // namespace

BiLstmLayer::BiLstmLayer(LayerSpec spec, const std::string& prefix)
    : Layer(spec),
      fw_(half_spec(spec), prefix + ".fw"),
      bw_(half_spec(spec), prefix + ".bw") {
    validate_sizes(spec_, "bilstm");
}

Sequence BiLstmLayer::forward(const Sequence& input) {
    const Sequence out_f = fw_.forward(input);
    const Sequence out_b = bw_.forward(reversed(input));
    const int h = spec_.output_size;
    Sequence out;
    if (spec_.returns_sequence) {
        const std::size_t t_len = input.size();
        out.resize(t_len);
        for (std::size_t t = 0; t < t_len; ++t) {
            out[t].resize(out_f[t].rows(), 2 * h);
            out[t].leftCols(h) = out_f[t];
            out[t].rightCols(h) = out_b[t_len - 1 - t];
        }
    } else {
        out.resize(1);
        out[0].resize(out_f[0].rows(), 2 * h);
        out[0].leftCols(h) = out_f[0];
        out[0].rightCols(h) = out_b[0];
    }
    return out;
}

Sequence BiLstmLayer::backward(const Sequence& upstream) {
    const int h = spec_.output_size;
    Sequence d_f, d_b;
    if (spec_.returns_sequence) {
        const std::size_t t_len = upstream.size();
        d_f.resize(t_len);
        d_b.resize(t_len);
        for (std::size_t t = 0; t < t_len; ++t) {
            d_f[t] = upstream[t].leftCols(h);
            d_b[t] = upstream[t_len - 1 - t].rightCols(h);
        }
    } else {
        d_f = {upstream[0].leftCols(h)};
        d_b = {upstream[0].rightCols(h)};
    }
    const Sequence din_f = fw_.backward(d_f);
    const Sequence din_b = bw_.backward(d_b);
    Sequence din(din_f.size());
    for (std::size_t t = 0; t < din_f.size(); ++t)
        din[t] = din_f[t] + din_b[din_b.size() - 1 - t];
    return din;
}

void BiLstmLayer::collect_params(std::vector<Parameter*>& out) {
    fw_.collect_params(out);
    bw_.collect_params(out);
}

}  // namespace tclf::nn
