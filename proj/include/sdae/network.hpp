#pragma once

#include "sdae/autoencoder.hpp"
#include "sdae/linalg.hpp"
#include "sdae/rng.hpp"
#include "sdae/train_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sdae {

/// Shape and training settings for one level of the stack.
struct LayerSpec {
    Eigen::Index input_dim = 0;
    Eigen::Index hidden_dim = 0;
    CorruptionSpec corruption;
    LossKind loss = LossKind::SquaredError;
    TrainConfig train;
};

/// Checks positive dims and that each spec's hidden_dim feeds the next input_dim.
inline void validate_chain(const std::vector<LayerSpec>& specs) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].input_dim <= 0 || specs[i].hidden_dim <= 0)
            throw ParameterError("layer " + std::to_string(i + 1) + ": dimensions must be positive");
        if (i + 1 < specs.size() && specs[i].hidden_dim != specs[i + 1].input_dim)
            throw ParameterError("layer chain broken: layer " + std::to_string(i + 1) + " outputs " +
                                 std::to_string(specs[i].hidden_dim) + " but layer " + std::to_string(i + 2) +
                                 " expects " + std::to_string(specs[i + 1].input_dim));
    }
}

template <typename Scalar>
struct SdaeStackT {
    std::vector<DaeLayerT<Scalar>> layers;
    std::vector<LayerSpec> specs;

    std::size_t size() const { return layers.size(); }
    bool empty() const { return layers.empty(); }
};

using SdaeStack = SdaeStackT<double>;

/// One step of the greedy schedule: layer `layer` (0-based) trained on a
/// (rows x cols) input while `layers_before` layers existed in the stack.
struct PretrainEvent {
    std::size_t layer = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::size_t layers_before = 0;
};

template <typename Scalar>
struct PretrainResult {
    SdaeStackT<Scalar> stack;
    std::vector<TrainReport> traces;
    std::vector<PretrainEvent> log;
};

/// Composition of the stack's encoders. An empty stack is the identity.
template <typename Scalar>
MatrixX<Scalar> represent(const SdaeStackT<Scalar>& stack, const MatrixArg<Scalar>& x) {
    MatrixX<Scalar> h = x;
    for (const auto& layer : stack.layers)
        h = encode(layer, h);
    return h;
}

/// Greedy layer-wise pretraining.
///
/// Layer i is trained as a denoising autoencoder on the clean encoding of the
/// data by layers 0..i-1; corruption touches only its own input. For each
/// layer two streams are split off `rng`: one for initialization, one for
/// training.
template <typename Scalar>
PretrainResult<Scalar> pretrain(const std::vector<LayerSpec>& specs, const MatrixX<Scalar>& unlabeled, Rng& rng) {
    validate_chain(specs);
    if (!specs.empty() && unlabeled.cols() != specs.front().input_dim)
        throw ShapeError("pretrain: data " + shape_string(unlabeled) + " does not match input dim " +
                         std::to_string(specs.front().input_dim));

    PretrainResult<Scalar> result;
    MatrixX<Scalar> input = unlabeled;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const LayerSpec& spec = specs[i];
        Rng init_rng = rng.split();
        Rng train_rng = rng.split();
        auto layer = DaeLayerT<Scalar>::initialized(spec.input_dim, spec.hidden_dim, init_rng);

        result.log.push_back({i, input.rows(), input.cols(), result.stack.size()});
        result.traces.push_back(train_dae(layer, input, spec.corruption, spec.loss, spec.train, train_rng));

        input = encode(layer, input);
        result.stack.layers.push_back(std::move(layer));
        result.stack.specs.push_back(spec);
    }
    return result;
}

template <typename Scalar>
struct DenseLayerT {
    MatrixX<Scalar> weights;  // (out x in)
    VectorX<Scalar> bias;     // length out

    Eigen::Index input_dim() const { return weights.cols(); }
    Eigen::Index output_dim() const { return weights.rows(); }
};

/// Sigmoid feed-forward classifier with a single output unit.
template <typename Scalar>
struct FeedForwardNetT {
    std::vector<DenseLayerT<Scalar>> layers;

    Eigen::Index input_dim() const { return layers.empty() ? 0 : layers.front().input_dim(); }
    Eigen::Index output_dim() const { return layers.empty() ? 0 : layers.back().output_dim(); }

    /// e.g. "18-14-8-1"
    std::string architecture() const {
        if (layers.empty())
            return "";
        std::string out = std::to_string(layers.front().input_dim());
        for (const auto& layer : layers)
            out += "-" + std::to_string(layer.output_dim());
        return out;
    }

    std::vector<Eigen::Index> dims() const {
        std::vector<Eigen::Index> out;
        if (layers.empty())
            return out;
        out.push_back(layers.front().input_dim());
        for (const auto& layer : layers)
            out.push_back(layer.output_dim());
        return out;
    }

    void validate() const {
        if (layers.empty())
            throw ParameterError("network has no layers");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].bias.size() != layers[i].output_dim())
                throw ShapeError("layer " + std::to_string(i + 1) + ": bias length does not match weights " +
                                 shape_string(layers[i].weights));
            if (i > 0 && layers[i].input_dim() != layers[i - 1].output_dim())
                throw ShapeError("layer " + std::to_string(i + 1) + " does not chain onto the previous layer");
        }
        if (output_dim() != 1)
            throw ShapeError("network output must be a single unit, got " + std::to_string(output_dim()));
    }

    bool finite() const {
        return std::all_of(layers.begin(), layers.end(),
                           [](const auto& l) { return all_finite(l.weights) && all_finite(l.bias); });
    }
};

using FeedForwardNet = FeedForwardNetT<double>;
using DenseLayer = DenseLayerT<double>;

template <typename Scalar>
DenseLayerT<Scalar> random_dense_layer(Eigen::Index input_dim, Eigen::Index output_dim, Rng& rng) {
    if (input_dim <= 0 || output_dim <= 0)
        throw ParameterError("layer dimensions must be positive");
    const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(input_dim));
    return {rng_uniform<Scalar>(rng, output_dim, input_dim, -bound, bound), VectorX<Scalar>::Zero(output_dim)};
}

/// Encoder weights and biases copied verbatim, decoder biases dropped, and a
/// randomly initialized (last_hidden -> 1) output layer appended.
template <typename Scalar>
FeedForwardNetT<Scalar> unroll(const SdaeStackT<Scalar>& stack, Rng& rng) {
    if (stack.empty())
        throw ParameterError("unroll: stack is empty");
    FeedForwardNetT<Scalar> net;
    for (const auto& layer : stack.layers)
        net.layers.push_back({layer.weights, layer.encoder_bias});
    net.layers.push_back(random_dense_layer<Scalar>(stack.layers.back().hidden_dim(), 1, rng));
    return net;
}

/// Every layer initialized at random, same rule as the output layer of unroll.
template <typename Scalar = double>
FeedForwardNetT<Scalar> random_net(const std::vector<Eigen::Index>& dims, Rng& rng) {
    if (dims.size() < 2)
        throw ParameterError("network needs at least an input and an output dimension");
    FeedForwardNetT<Scalar> net;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i)
        net.layers.push_back(random_dense_layer<Scalar>(dims[i], dims[i + 1], rng));
    return net;
}

/// Activations of every layer; element 0 is the input itself.
template <typename Scalar>
std::vector<MatrixX<Scalar>> forward(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x) {
    if (x.cols() != net.input_dim())
        throw ShapeError("forward: input " + shape_string(x) + " does not match network " + net.architecture());
    std::vector<MatrixX<Scalar>> acts;
    acts.reserve(net.layers.size() + 1);
    acts.push_back(x);
    for (const auto& layer : net.layers) {
        MatrixX<Scalar> pre = matmul_bt(acts.back(), layer.weights);
        add_row_bias(pre, layer.bias);
        acts.push_back(sigmoid(pre));
    }
    return acts;
}

template <typename Scalar>
VectorX<Scalar> scores(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x) {
    return forward(net, x).back().col(0);
}

struct Prediction {
    Labels labels;
    Vector scores;
};

/// Label 1 iff score >= 0.5, i.e. the nearer of {0, 1}, ties going to 1.
template <typename Scalar>
Prediction predict(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x) {
    const VectorX<Scalar> s = scores(net, x);
    Prediction p;
    p.scores = s.template cast<double>();
    p.labels.resize(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i)
        p.labels[static_cast<std::size_t>(i)] = s(i) >= Scalar(0.5) ? 1 : 0;
    return p;
}

template <typename Scalar>
MatrixX<Scalar> label_column(const Labels& y) {
    MatrixX<Scalar> t(static_cast<Eigen::Index>(y.size()), 1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1)
            throw ParameterError("labels must be 0 or 1");
        t(static_cast<Eigen::Index>(i), 0) = static_cast<Scalar>(y[i]);
    }
    return t;
}

/// Mean over samples of the output loss. CrossEntropy is binary
/// cross-entropy on the sigmoid output; SquaredError is (p - y)^2.
template <typename Scalar>
Scalar data_loss(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x, const MatrixArg<Scalar>& targets,
                 LossKind kind) {
    return loss(targets, forward(net, x).back(), kind);
}

template <typename Scalar>
Scalar weight_norm_sq(const FeedForwardNetT<Scalar>& net) {
    Scalar total = 0;
    for (const auto& layer : net.layers)
        total += layer.weights.squaredNorm();
    return total;
}

/// data_loss + (l2 / 2) * sum of squared weights. Its gradient is the data
/// gradient plus l2 * W on weights.
template <typename Scalar>
Scalar objective(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x, const MatrixArg<Scalar>& targets,
                 LossKind kind, Scalar l2) {
    return data_loss(net, x, targets, kind) + Scalar(0.5) * l2 * weight_norm_sq(net);
}

/// Backpropagated gradient of data_loss; same layout as the net.
template <typename Scalar>
std::vector<DenseLayerT<Scalar>> net_gradients(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x,
                                               const MatrixArg<Scalar>& targets, LossKind kind) {
    const auto acts = forward(net, x);
    const MatrixX<Scalar>& out = acts.back();
    require_same_shape(out, targets, "net_gradients");
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(std::max<Eigen::Index>(x.rows(), 1));

    MatrixX<Scalar> delta;
    if (kind == LossKind::CrossEntropy)
        delta = inv_n * (out - targets);
    else
        delta = (Scalar(2) * inv_n) * ((out - targets).array() * out.array() * (Scalar(1) - out.array())).matrix();

    std::vector<DenseLayerT<Scalar>> grads(net.layers.size());
    for (std::size_t l = net.layers.size(); l-- > 0;) {
        const MatrixX<Scalar>& input = acts[l];
        grads[l].weights = matmul_at(delta, input);
        grads[l].bias = column_sums(delta);
        if (l > 0) {
            MatrixX<Scalar> back = matmul(delta, net.layers[l].weights);
            back.array() *= input.array() * (Scalar(1) - input.array());
            delta = std::move(back);
        }
    }
    return grads;
}

template <typename Scalar>
std::vector<DenseLayerT<Scalar>> zero_like(const FeedForwardNetT<Scalar>& net) {
    std::vector<DenseLayerT<Scalar>> out;
    for (const auto& layer : net.layers)
        out.push_back({MatrixX<Scalar>::Zero(layer.weights.rows(), layer.weights.cols()),
                       VectorX<Scalar>::Zero(layer.bias.size())});
    return out;
}

/// v <- mu v - lr (g + l2 W) on weights, v <- mu v - lr g on biases, then
/// theta <- theta + v. `grads` is the data gradient only.
template <typename Scalar>
void momentum_step(FeedForwardNetT<Scalar>& net, const std::vector<DenseLayerT<Scalar>>& grads,
                   std::vector<DenseLayerT<Scalar>>& velocity, const TrainConfig& cfg) {
    const Scalar lr = static_cast<Scalar>(cfg.learning_rate);
    const Scalar mu = static_cast<Scalar>(cfg.momentum);
    const Scalar l2 = static_cast<Scalar>(cfg.l2_penalty);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& layer = net.layers[l];
        velocity[l].weights = mu * velocity[l].weights - lr * (grads[l].weights + l2 * layer.weights);
        velocity[l].bias = mu * velocity[l].bias - lr * grads[l].bias;
        layer.weights += velocity[l].weights;
        layer.bias += velocity[l].bias;
    }
}

template <typename Scalar>
double accuracy_on(const FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x, const Labels& y) {
    const Prediction p = predict(net, x);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        hits += p.labels[i] == y[i] ? 1 : 0;
    return y.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(y.size());
}

/// Supervised backpropagation over every layer of the net.
///
/// Mini-batch SGD with momentum and L2 on weights; rows are reshuffled each
/// epoch with a stream seeded from `cfg.seed`. The report holds the
/// full-training-set data loss and accuracy after each epoch.
template <typename Scalar>
TrainReport finetune(FeedForwardNetT<Scalar>& net, const MatrixArg<Scalar>& x, const Labels& y, const TrainConfig& cfg,
                     LossKind kind = LossKind::CrossEntropy) {
    cfg.validate();
    net.validate();
    if (x.rows() == 0)
        throw ParameterError("finetune: empty labeled set");
    if (static_cast<std::size_t>(x.rows()) != y.size())
        throw ShapeError("finetune: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                         " labels");
    const MatrixX<Scalar> targets = label_column<Scalar>(y);
    Rng shuffle_rng = Rng::derive(cfg.seed, StreamPurpose::Shuffle);
    auto velocity = zero_like(net);
    const auto n = y.size();

    TrainReport report;
    report.loss.reserve(cfg.epochs);
    report.accuracy.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<std::size_t> order = shuffle_rng.permutation(n);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                               order.begin() + static_cast<std::ptrdiff_t>(stop));
            const auto grads = net_gradients(net, gather_rows(x, idx), gather_rows(targets, idx), kind);
            momentum_step(net, grads, velocity, cfg);
        }
        if (!net.finite())
            throw NumericError("finetune: parameters diverged at epoch " + std::to_string(epoch + 1));
        report.loss.push_back(static_cast<double>(data_loss(net, x, targets, kind)));
        report.accuracy.push_back(accuracy_on(net, x, y));
    }
    return report;
}

}  // namespace sdae
