#pragma once

#include "sdae/linalg.hpp"
#include "sdae/rng.hpp"
#include "sdae/train_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sdae {

enum class CorruptionKind { None, Masking, Gaussian };

/// Corruption process applied to a layer's input during its training.
///
/// Masking zeroes each component independently with probability `nu`
/// (Bernoulli per component, so `nu` is the expected fraction, not an exact
/// count per row). Gaussian adds i.i.d. N(0, sigma^2) noise.
struct CorruptionSpec {
    CorruptionKind kind = CorruptionKind::Masking;
    double nu = 0.0;
    double sigma = 0.1;

    static CorruptionSpec none() { return {CorruptionKind::None, 0.0, 0.0}; }
    static CorruptionSpec masking(double nu) { return {CorruptionKind::Masking, nu, 0.0}; }
    static CorruptionSpec gaussian(double sigma) { return {CorruptionKind::Gaussian, 0.0, sigma}; }

    void validate() const {
        if (!(nu >= 0.0 && nu <= 1.0))
            throw ParameterError("corruption: masking fraction must lie in [0, 1]");
        if (!(sigma >= 0.0))
            throw ParameterError("corruption: sigma must be non-negative");
    }
};

enum class LossKind { SquaredError, CrossEntropy };

inline const char* to_string(LossKind kind) {
    return kind == LossKind::SquaredError ? "squared_error" : "cross_entropy";
}

inline const char* to_string(CorruptionKind kind) {
    switch (kind) {
    case CorruptionKind::None: return "none";
    case CorruptionKind::Masking: return "masking";
    case CorruptionKind::Gaussian: return "gaussian";
    }
    return "unknown";
}

/// Reconstructions are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kCrossEntropyClamp = 1e-12;

/// One autoencoder layer with tied weights.
///
/// `weights` is (hidden x input). The decoder uses its transpose; there is no
/// separately stored decoder matrix.
template <typename Scalar>
struct DaeLayerT {
    MatrixX<Scalar> weights;
    VectorX<Scalar> encoder_bias;  // length hidden
    VectorX<Scalar> decoder_bias;  // length input

    DaeLayerT() = default;
    DaeLayerT(Eigen::Index input_dim, Eigen::Index hidden_dim)
        : weights(MatrixX<Scalar>::Zero(hidden_dim, input_dim)),
          encoder_bias(VectorX<Scalar>::Zero(hidden_dim)),
          decoder_bias(VectorX<Scalar>::Zero(input_dim)) {}

    /// Weights uniform in +-1/sqrt(input_dim), biases zero.
    static DaeLayerT initialized(Eigen::Index input_dim, Eigen::Index hidden_dim, Rng& rng) {
        if (input_dim <= 0 || hidden_dim <= 0)
            throw ParameterError("layer dimensions must be positive");
        DaeLayerT layer(input_dim, hidden_dim);
        const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(input_dim));
        layer.weights = rng_uniform<Scalar>(rng, hidden_dim, input_dim, -bound, bound);
        return layer;
    }

    Eigen::Index input_dim() const { return weights.cols(); }
    Eigen::Index hidden_dim() const { return weights.rows(); }

    bool finite() const { return all_finite(weights) && all_finite(encoder_bias) && all_finite(decoder_bias); }
};

using DaeLayer = DaeLayerT<double>;

template <typename Scalar>
struct DaeGradients {
    MatrixX<Scalar> weights;
    VectorX<Scalar> encoder_bias;
    VectorX<Scalar> decoder_bias;
};

/// y = sigmoid(x W^T + b_y), one row per sample.
template <typename Scalar>
MatrixX<Scalar> encode(const DaeLayerT<Scalar>& layer, const MatrixArg<Scalar>& x) {
    if (x.cols() != layer.input_dim())
        throw ShapeError("encode: input " + shape_string(x) + " does not match layer weights " +
                         shape_string(layer.weights));
    MatrixX<Scalar> pre = matmul_bt(x, layer.weights);
    add_row_bias(pre, layer.encoder_bias);
    return sigmoid(pre);
}

/// z = sigmoid(y W + b_z), decoding with the transposed encoder weights.
template <typename Scalar>
MatrixX<Scalar> decode(const DaeLayerT<Scalar>& layer, const MatrixArg<Scalar>& y) {
    if (y.cols() != layer.hidden_dim())
        throw ShapeError("decode: code " + shape_string(y) + " does not match layer weights " +
                         shape_string(layer.weights));
    MatrixX<Scalar> pre = matmul(y, layer.weights);
    add_row_bias(pre, layer.decoder_bias);
    return sigmoid(pre);
}

template <typename Scalar>
MatrixX<Scalar> reconstruct(const DaeLayerT<Scalar>& layer, const MatrixArg<Scalar>& x) {
    return decode(layer, encode(layer, x));
}

template <typename Scalar>
MatrixX<Scalar> corrupt(const MatrixX<Scalar>& x, const CorruptionSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
    case CorruptionKind::None:
        return x;
    case CorruptionKind::Masking: {
        MatrixX<Scalar> out = x;
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                if (rng.bernoulli(spec.nu))
                    out(i, j) = Scalar(0);
        return out;
    }
    case CorruptionKind::Gaussian:
        return x + rng_gaussian<Scalar>(rng, x.rows(), x.cols(), static_cast<Scalar>(spec.sigma));
    }
    return x;
}

/// Reconstruction loss summed over components and averaged over samples.
///
/// CrossEntropy is -sum[x ln z + (1 - x) ln(1 - z)], with z clamped to
/// [1e-12, 1 - 1e-12]. It requires x in [0, 1].
template <typename Scalar>
Scalar loss(const MatrixX<Scalar>& x, const MatrixX<Scalar>& z, LossKind kind) {
    require_same_shape(x, z, "loss");
    if (x.rows() == 0)
        return Scalar(0);
    Scalar total = 0;
    if (kind == LossKind::SquaredError) {
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                const Scalar d = x(i, j) - z(i, j);
                total += d * d;
            }
    } else {
        const Scalar lo = static_cast<Scalar>(kCrossEntropyClamp);
        const Scalar hi = Scalar(1) - lo;
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                const Scalar t = x(i, j);
                if (!(t >= Scalar(0) && t <= Scalar(1)))
                    throw ParameterError("cross-entropy loss requires targets in [0, 1]");
                const Scalar p = std::clamp(z(i, j), lo, hi);
                total -= t * std::log(p) + (Scalar(1) - t) * std::log(Scalar(1) - p);
            }
    }
    return total / static_cast<Scalar>(x.rows());
}

/// Gradient of the batch-mean loss L(x_clean, decode(encode(x_corrupt))).
///
/// With tied weights the weight gradient collects both the encoder term
/// delta_y^T x_corrupt and the decoder term y^T delta_z.
template <typename Scalar>
DaeGradients<Scalar> dae_gradients(const DaeLayerT<Scalar>& layer, const MatrixArg<Scalar>& x_clean,
                                   const MatrixArg<Scalar>& x_corrupt, LossKind kind) {
    require_same_shape(x_clean, x_corrupt, "dae_gradients");
    const MatrixX<Scalar> y = encode(layer, x_corrupt);
    const MatrixX<Scalar> z = decode(layer, y);
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(std::max<Eigen::Index>(x_clean.rows(), 1));

    MatrixX<Scalar> delta_z;
    if (kind == LossKind::SquaredError) {
        delta_z = (Scalar(2) * inv_n) * ((z - x_clean).array() * z.array() * (Scalar(1) - z.array())).matrix();
    } else {
        delta_z = inv_n * (z - x_clean);
    }
    // delta_z W^T: (n x d) times (d x d') with W stored (d' x d).
    MatrixX<Scalar> delta_y = matmul_bt(delta_z, layer.weights);
    delta_y.array() *= y.array() * (Scalar(1) - y.array());

    DaeGradients<Scalar> g;
    g.weights = matmul_at(delta_y, x_corrupt) + matmul_at(y, delta_z);
    g.encoder_bias = column_sums(delta_y);
    g.decoder_bias = column_sums(delta_z);
    return g;
}

/// SGD with classical momentum on one autoencoder layer.
///
/// Each epoch shuffles the rows, walks them in mini-batches of
/// `cfg.batch_size`, and draws fresh corruption for every batch. The returned
/// trace holds, per epoch, the sample-weighted mean of the batch losses.
/// The shuffle and corruption streams are split off `rng`.
template <typename Scalar>
TrainReport train_dae(DaeLayerT<Scalar>& layer, const MatrixArg<Scalar>& data, const CorruptionSpec& spec,
                      LossKind kind, const TrainConfig& cfg, Rng& rng) {
    cfg.validate();
    spec.validate();
    if (data.rows() == 0)
        throw ParameterError("train_dae: empty training data");
    if (data.cols() != layer.input_dim())
        throw ShapeError("train_dae: data " + shape_string(data) + " does not match layer weights " +
                         shape_string(layer.weights));

    Rng shuffle_rng = rng.split();
    Rng noise_rng = rng.split();
    const auto n = static_cast<std::size_t>(data.rows());
    const Scalar lr = static_cast<Scalar>(cfg.learning_rate);
    const Scalar mu = static_cast<Scalar>(cfg.momentum);

    MatrixX<Scalar> v_w = MatrixX<Scalar>::Zero(layer.weights.rows(), layer.weights.cols());
    VectorX<Scalar> v_by = VectorX<Scalar>::Zero(layer.encoder_bias.size());
    VectorX<Scalar> v_bz = VectorX<Scalar>::Zero(layer.decoder_bias.size());

    TrainReport report;
    report.loss.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<std::size_t> order = shuffle_rng.permutation(n);
        Scalar epoch_loss = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            const std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                               order.begin() + static_cast<std::ptrdiff_t>(stop));
            const MatrixX<Scalar> clean = gather_rows(data, idx);
            const MatrixX<Scalar> noisy = corrupt(clean, spec, noise_rng);

            epoch_loss += loss(clean, reconstruct(layer, noisy), kind) * static_cast<Scalar>(idx.size());

            const DaeGradients<Scalar> g = dae_gradients(layer, clean, noisy, kind);
            v_w = mu * v_w - lr * g.weights;
            v_by = mu * v_by - lr * g.encoder_bias;
            v_bz = mu * v_bz - lr * g.decoder_bias;
            layer.weights += v_w;
            layer.encoder_bias += v_by;
            layer.decoder_bias += v_bz;
        }
        if (!layer.finite())
            throw NumericError("train_dae: parameters diverged at epoch " + std::to_string(epoch + 1));
        report.loss.push_back(static_cast<double>(epoch_loss / static_cast<Scalar>(n)));
    }
    return report;
}

}  // namespace sdae
