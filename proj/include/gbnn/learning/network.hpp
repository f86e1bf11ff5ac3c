#pragma once

// Convolution + dense regression network trained with mean log-cosh loss and
// Adam. Inputs are s x 2n exponent matrices flattened row-major into columns
// of a batch matrix; all arithmetic is in double precision.
//
// Layout: conv (F filters, 2x2, stride 1, valid) -> ReLU -> dropout
//         -> [dense -> ReLU -> dropout] x k -> linear scalar output.
// With conv_filters == 0 the conv stage is skipped and the flattened input
// feeds the first dense layer directly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gbnn/error.hpp"
#include "gbnn/learning/metrics.hpp"
#include "gbnn/random.hpp"

namespace gbnn {

struct NetworkConfig {
    std::size_t input_rows = 5;  // s
    std::size_t input_cols = 10;  // 2n
    std::size_t conv_filters = 300;
    std::vector<std::size_t> dense_sizes{500, 500};
    double dropout_rate = 0.5;
    /// Multiplies every input entry before the first layer (1/d for exponent inputs).
    double input_scale = 1.0;
    double learning_rate = 1e-3;
    std::size_t batch_size = 128;
    std::size_t epochs = 100;
    double validation_fraction = 0.10;
    std::uint64_t seed = 0;

    void validate() const {
        if (input_rows == 0 || input_cols == 0) throw ArgumentError("network: empty input shape");
        if (conv_filters > 0 && (input_rows < 2 || input_cols < 2))
            throw ArgumentError("network: 2x2 convolution needs at least a 2x2 input");
        if (!(dropout_rate >= 0 && dropout_rate < 1)) throw ArgumentError("network: dropout_rate must be in [0,1)");
        if (batch_size < 1) throw ArgumentError("network: batch_size must be >= 1");
        if (epochs < 1) throw ArgumentError("network: epochs must be >= 1");
        if (!(validation_fraction >= 0 && validation_fraction < 1))
            throw ArgumentError("network: validation_fraction must be in [0,1)");
        for (auto h : dense_sizes)
            if (h == 0) throw ArgumentError("network: dense layer of size 0");
    }

    std::size_t input_size() const { return input_rows * input_cols; }
    std::size_t conv_positions() const { return (input_rows - 1) * (input_cols - 1); }
    /// Width of the vector entering the first dense layer.
    std::size_t flattened_size() const {
        return conv_filters > 0 ? conv_filters * conv_positions() : input_size();
    }
};

/// All trainable tensors; biases are single-column matrices.
struct NetworkParams {
    Eigen::MatrixXd conv_w;  // F x 4, patch order (0,0),(0,1),(1,0),(1,1)
    Eigen::MatrixXd conv_b;  // F x 1
    std::vector<Eigen::MatrixXd> dense_w;
    std::vector<Eigen::MatrixXd> dense_b;
    Eigen::MatrixXd out_w;  // 1 x last hidden
    Eigen::MatrixXd out_b;  // 1 x 1

    template <class Self, class Fn>
    static void visit(Self& self, Fn&& fn) {
        fn(std::string("conv.weight"), self.conv_w);
        fn(std::string("conv.bias"), self.conv_b);
        for (std::size_t i = 0; i < self.dense_w.size(); ++i) {
            fn("dense" + std::to_string(i) + ".weight", self.dense_w[i]);
            fn("dense" + std::to_string(i) + ".bias", self.dense_b[i]);
        }
        fn(std::string("out.weight"), self.out_w);
        fn(std::string("out.bias"), self.out_b);
    }

    template <class Fn>
    void for_each(Fn&& fn) { visit(*this, std::forward<Fn>(fn)); }
    template <class Fn>
    void for_each(Fn&& fn) const { visit(*this, std::forward<Fn>(fn)); }

    /// Same shapes, all zeros.
    NetworkParams zeros_like() const {
        NetworkParams z = *this;
        z.for_each([](const std::string&, Eigen::MatrixXd& m) { m.setZero(); });
        return z;
    }

    bool all_finite() const {
        bool ok = true;
        for_each([&](const std::string&, const Eigen::MatrixXd& m) { ok = ok && m.allFinite(); });
        return ok;
    }

    std::size_t parameter_count() const {
        std::size_t c = 0;
        for_each([&](const std::string&, const Eigen::MatrixXd& m) { c += static_cast<std::size_t>(m.size()); });
        return c;
    }

    friend bool operator==(const NetworkParams& a, const NetworkParams& b) {
        bool eq = true;
        std::vector<const Eigen::MatrixXd*> rhs;
        b.for_each([&](const std::string&, const Eigen::MatrixXd& m) { rhs.push_back(&m); });
        std::size_t i = 0;
        a.for_each([&](const std::string&, const Eigen::MatrixXd& m) {
            eq = eq && i < rhs.size() && m.rows() == rhs[i]->rows() && m.cols() == rhs[i]->cols() && m == *rhs[i];
            ++i;
        });
        return eq && i == rhs.size();
    }
};

struct NeuralNet {
    NetworkConfig config;
    NetworkParams params;
};

struct AdamState {
    NetworkParams m;
    NetworkParams v;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// He-uniform weights (limit sqrt(6 / fan_in)), zero biases; deterministic in config.seed.
inline std::pair<NeuralNet, AdamState> nn_init(const NetworkConfig& config) {
    config.validate();
    SplitMix64 rng = SplitMix64::stream(config.seed, 0);
    auto he = [&](Eigen::Index rows, Eigen::Index cols, std::size_t fan_in) {
        Eigen::MatrixXd m(rows, cols);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-limit, limit);
        return m;
    };
    NeuralNet net{config, {}};
    auto& p = net.params;
    const auto F = static_cast<Eigen::Index>(config.conv_filters);
    p.conv_w = he(F, 4, 4);
    p.conv_b = Eigen::MatrixXd::Zero(F, 1);
    std::size_t width = config.flattened_size();
    for (auto h : config.dense_sizes) {
        p.dense_w.push_back(he(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(width), width));
        p.dense_b.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h), 1));
        width = h;
    }
    p.out_w = he(1, static_cast<Eigen::Index>(width), width);
    p.out_b = Eigen::MatrixXd::Zero(1, 1);
    AdamState adam;
    adam.m = p.zeros_like();
    adam.v = p.zeros_like();
    return {std::move(net), std::move(adam)};
}

/// Intermediate values of a batched forward pass, kept for backpropagation.
struct ForwardCache {
    Eigen::MatrixXd patches;  // 4 x (P*B), column b*P + p
    Eigen::MatrixXd conv_pre;  // F x (P*B)
    Eigen::MatrixXd conv_mask;  // F x (P*B), entries 0 or 1/keep (empty when no dropout)
    Eigen::MatrixXd flat;  // (F*P or D) x B, input to the first dense layer
    std::vector<Eigen::MatrixXd> dense_pre;  // h x B
    std::vector<Eigen::MatrixXd> dense_mask;
    std::vector<Eigen::MatrixXd> hidden;  // post-activation, post-dropout, h x B
    Eigen::RowVectorXd output;  // 1 x B
};

namespace detail {

inline Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, SplitMix64& rng) {
    const double keep = 1.0 - rate;
    Eigen::MatrixXd mask(rows, cols);
    // Column-major fill: each batch element's mask is drawn contiguously.
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) mask(i, j) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
    return mask;
}

inline void check_input(const NetworkConfig& c, const Eigen::MatrixXd& x) {
    if (static_cast<std::size_t>(x.rows()) != c.input_size())
        throw DimensionError("network input has " + std::to_string(x.rows()) + " rows, expected " +
                             std::to_string(c.input_size()));
    if (x.cols() == 0) throw ArgumentError("network: empty batch");
}

inline double log_cosh(double r) {
    const double a = std::abs(r);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace detail

/// Batched forward pass; each column of `x` is one flattened input matrix.
/// In training mode inverted dropout is applied after every hidden activation.
inline ForwardCache nn_forward_batch(const NeuralNet& net, const Eigen::MatrixXd& x, bool training, SplitMix64& rng) {
    const NetworkConfig& c = net.config;
    const NetworkParams& p = net.params;
    detail::check_input(c, x);
    const bool drop = training && c.dropout_rate > 0;
    const Eigen::Index B = x.cols();
    ForwardCache fc;

    if (c.conv_filters > 0) {
        const auto R = static_cast<Eigen::Index>(c.input_rows);
        const auto C = static_cast<Eigen::Index>(c.input_cols);
        const Eigen::Index P = (R - 1) * (C - 1);
        const auto F = static_cast<Eigen::Index>(c.conv_filters);
        fc.patches.resize(4, P * B);
        for (Eigen::Index b = 0; b < B; ++b) {
            for (Eigen::Index i = 0; i + 1 < R; ++i) {
                for (Eigen::Index j = 0; j + 1 < C; ++j) {
                    const Eigen::Index col = b * P + i * (C - 1) + j;
                    fc.patches(0, col) = x(i * C + j, b) * c.input_scale;
                    fc.patches(1, col) = x(i * C + j + 1, b) * c.input_scale;
                    fc.patches(2, col) = x((i + 1) * C + j, b) * c.input_scale;
                    fc.patches(3, col) = x((i + 1) * C + j + 1, b) * c.input_scale;
                }
            }
        }
        fc.conv_pre.noalias() = p.conv_w * fc.patches;
        fc.conv_pre.colwise() += p.conv_b.col(0);
        Eigen::MatrixXd act = fc.conv_pre.cwiseMax(0.0);
        if (drop) {
            fc.conv_mask = detail::dropout_mask(F, P * B, c.dropout_rate, rng);
            act.array() *= fc.conv_mask.array();
        }
        // F x (P*B) column-major is bit-identical to (F*P) x B with row index f + F*p.
        fc.flat = Eigen::Map<Eigen::MatrixXd>(act.data(), F * P, B);
    } else {
        fc.flat = x * c.input_scale;
    }

    const Eigen::MatrixXd* in = &fc.flat;
    for (std::size_t l = 0; l < p.dense_w.size(); ++l) {
        Eigen::MatrixXd pre;
        pre.noalias() = p.dense_w[l] * *in;
        pre.colwise() += p.dense_b[l].col(0);
        Eigen::MatrixXd act = pre.cwiseMax(0.0);
        Eigen::MatrixXd mask;
        if (drop) {
            mask = detail::dropout_mask(act.rows(), act.cols(), c.dropout_rate, rng);
            act.array() *= mask.array();
        }
        fc.dense_pre.push_back(std::move(pre));
        fc.dense_mask.push_back(std::move(mask));
        fc.hidden.push_back(std::move(act));
        in = &fc.hidden.back();
    }
    fc.output.noalias() = p.out_w * *in;
    fc.output.array() += p.out_b(0, 0);
    return fc;
}

/// Scalar prediction for one s x 2n input matrix.
inline double nn_forward(const NeuralNet& net, const Eigen::MatrixXd& input, bool training, SplitMix64& rng) {
    const NetworkConfig& c = net.config;
    if (static_cast<std::size_t>(input.rows()) != c.input_rows || static_cast<std::size_t>(input.cols()) != c.input_cols)
        throw DimensionError("nn_forward: input shape mismatch");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = input;
    Eigen::MatrixXd col = Eigen::Map<const Eigen::MatrixXd>(rm.data(), rm.size(), 1);
    return nn_forward_batch(net, col, training, rng).output(0);
}

/// Inference-mode predictions, evaluated in fixed-size chunks.
inline Eigen::VectorXd nn_predict(const NeuralNet& net, const Eigen::MatrixXd& x, Eigen::Index chunk = 512) {
    Eigen::VectorXd out(x.cols());
    SplitMix64 unused(0);
    for (Eigen::Index start = 0; start < x.cols(); start += chunk) {
        const Eigen::Index len = std::min(chunk, x.cols() - start);
        out.segment(start, len) = nn_forward_batch(net, x.middleCols(start, len), false, unused).output.transpose();
    }
    return out;
}

struct LossAndGradient {
    double loss = 0;
    NetworkParams grad;
};

/// Mean log-cosh loss over the batch and its gradient by backpropagation,
/// written into `out` (its tensors are reused when the shapes already match).
/// Dropout masks (training mode) come from `rng` and are shared by both passes.
inline void nn_loss_and_gradient(const NeuralNet& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 bool training, SplitMix64& rng, LossAndGradient& out) {
    if (x.cols() != y.size()) throw DimensionError("nn_loss_and_gradient: inputs/targets mismatch");
    const NetworkConfig& c = net.config;
    const NetworkParams& p = net.params;
    ForwardCache fc = nn_forward_batch(net, x, training, rng);
    const Eigen::Index B = x.cols();
    const double inv_b = 1.0 / static_cast<double>(B);

    if (out.grad.parameter_count() != p.parameter_count() || out.grad.dense_w.size() != p.dense_w.size())
        out.grad = p.zeros_like();
    Eigen::RowVectorXd residual = fc.output - y.transpose();
    double loss = 0;
    for (Eigen::Index b = 0; b < B; ++b) loss += detail::log_cosh(residual(b));
    out.loss = loss * inv_b;
    Eigen::RowVectorXd g_out = residual.array().tanh() * inv_b;

    const Eigen::MatrixXd& last = p.dense_w.empty() ? fc.flat : fc.hidden.back();
    out.grad.out_w.noalias() = g_out * last.transpose();
    out.grad.out_b(0, 0) = g_out.sum();
    Eigen::MatrixXd delta = p.out_w.transpose() * g_out;  // gradient w.r.t. current layer output

    for (std::size_t l = p.dense_w.size(); l-- > 0;) {
        if (fc.dense_mask[l].size() > 0) delta.array() *= fc.dense_mask[l].array();
        delta.array() *= (fc.dense_pre[l].array() > 0.0).cast<double>();
        const Eigen::MatrixXd& in = l == 0 ? fc.flat : fc.hidden[l - 1];
        out.grad.dense_w[l].noalias() = delta * in.transpose();
        out.grad.dense_b[l] = delta.rowwise().sum();
        Eigen::MatrixXd next;
        next.noalias() = p.dense_w[l].transpose() * delta;
        delta = std::move(next);
    }

    if (c.conv_filters > 0) {
        const auto F = static_cast<Eigen::Index>(c.conv_filters);
        const auto P = static_cast<Eigen::Index>(c.conv_positions());
        Eigen::MatrixXd dconv = Eigen::Map<Eigen::MatrixXd>(delta.data(), F, P * B);
        if (fc.conv_mask.size() > 0) dconv.array() *= fc.conv_mask.array();
        dconv.array() *= (fc.conv_pre.array() > 0.0).cast<double>();
        out.grad.conv_w.noalias() = dconv * fc.patches.transpose();
        out.grad.conv_b = dconv.rowwise().sum();
    }
}

inline LossAndGradient nn_loss_and_gradient(const NeuralNet& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                            bool training, SplitMix64& rng) {
    LossAndGradient out;
    nn_loss_and_gradient(net, x, y, training, rng, out);
    return out;
}

/// One bias-corrected Adam update.
inline void adam_step(AdamState& state, NetworkParams& params, const NetworkParams& grad, double learning_rate) {
    ++state.t;
    const double t = static_cast<double>(state.t);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    std::vector<Eigen::MatrixXd*> ps, ms, vs;
    std::vector<const Eigen::MatrixXd*> gs;
    params.for_each([&](const std::string&, Eigen::MatrixXd& m) { ps.push_back(&m); });
    state.m.for_each([&](const std::string&, Eigen::MatrixXd& m) { ms.push_back(&m); });
    state.v.for_each([&](const std::string&, Eigen::MatrixXd& m) { vs.push_back(&m); });
    grad.for_each([&](const std::string&, const Eigen::MatrixXd& m) { gs.push_back(&m); });
    if (ps.size() != gs.size() || ps.size() != ms.size() || ps.size() != vs.size())
        throw DimensionError("adam_step: tensor count mismatch");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i]->rows() != gs[i]->rows() || ps[i]->cols() != gs[i]->cols() || ms[i]->size() != ps[i]->size())
            throw DimensionError("adam_step: tensor shape mismatch");
        auto g = gs[i]->array();
        ms[i]->array() = state.beta1 * ms[i]->array() + (1.0 - state.beta1) * g;
        vs[i]->array() = state.beta2 * vs[i]->array() + (1.0 - state.beta2) * g.square();
        ps[i]->array() -= learning_rate * (ms[i]->array() / c1) / ((vs[i]->array() / c2).sqrt() + state.epsilon);
    }
}

struct EpochLoss {
    std::size_t epoch = 0;
    double train_loss = 0;
    double val_loss = 0;  // NaN when there is no validation split
};

struct TrainResult {
    NeuralNet net;
    std::vector<EpochLoss> curve;
    std::size_t train_rows = 0;
    std::size_t validation_rows = 0;
};

/// Mean log-cosh loss in inference mode.
inline double nn_eval_loss(const NeuralNet& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd pred = nn_predict(net, x);
    double loss = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) loss += detail::log_cosh(pred(i) - y(i));
    return loss / static_cast<double>(y.size());
}

/// Minibatch Adam training. The last floor(validation_fraction * N) columns
/// are held out for validation; minibatch order is reshuffled each epoch.
inline TrainResult train(const NetworkConfig& config, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                         const std::function<void(const EpochLoss&)>& on_epoch = {}) {
    config.validate();
    detail::check_input(config, inputs);
    if (inputs.cols() != targets.size()) throw DimensionError("train: inputs/targets mismatch");
    if (!targets.allFinite()) throw ArgumentError("train: non-finite target");

    const auto total = static_cast<std::size_t>(inputs.cols());
    const auto n_val = static_cast<std::size_t>(std::floor(config.validation_fraction * static_cast<double>(total)));
    const std::size_t n_train = total - n_val;
    if (n_train == 0) throw ArgumentError("train: no rows left after the validation split");

    auto [net, adam] = nn_init(config);
    SplitMix64 rng = SplitMix64::stream(config.seed, 1);
    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});

    const Eigen::MatrixXd x_val = inputs.rightCols(static_cast<Eigen::Index>(n_val));
    const Eigen::VectorXd y_val = targets.tail(static_cast<Eigen::Index>(n_val));

    TrainResult result;
    result.train_rows = n_train;
    result.validation_rows = n_val;
    Eigen::MatrixXd xb;
    Eigen::VectorXd yb;
    LossAndGradient lg;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        for (std::size_t i = n_train; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        double weighted = 0;
        for (std::size_t start = 0; start < n_train; start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, n_train - start);
            xb.resize(inputs.rows(), static_cast<Eigen::Index>(len));
            yb.resize(static_cast<Eigen::Index>(len));
            for (std::size_t k = 0; k < len; ++k) {
                xb.col(static_cast<Eigen::Index>(k)) = inputs.col(static_cast<Eigen::Index>(order[start + k]));
                yb(static_cast<Eigen::Index>(k)) = targets(static_cast<Eigen::Index>(order[start + k]));
            }
            nn_loss_and_gradient(net, xb, yb, true, rng, lg);
            adam_step(adam, net.params, lg.grad, config.learning_rate);
            weighted += lg.loss * static_cast<double>(len);
        }
        if (!net.params.all_finite()) throw ArgumentError("train: parameters diverged to non-finite values");
        EpochLoss el;
        el.epoch = epoch;
        el.train_loss = weighted / static_cast<double>(n_train);
        el.val_loss = n_val > 0 ? nn_eval_loss(net, x_val, y_val) : std::nan("");
        result.curve.push_back(el);
        if (on_epoch) on_epoch(el);
    }
    result.net = std::move(net);
    return result;
}

}  // namespace gbnn
