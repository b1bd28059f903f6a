#include "oracles.hpp"
#include "sdae/autoencoder.hpp"
#include "sdae/data.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sdae;

namespace {

DaeLayer random_layer(Eigen::Index d, Eigen::Index h, std::uint64_t seed, double scale = 1.0) {
    Rng rng(seed);
    DaeLayer layer(d, h);
    layer.weights = rng_uniform<double>(rng, h, d, -scale, scale);
    layer.encoder_bias = rng_uniform<double>(rng, h, 1, -0.5, 0.5).col(0);
    layer.decoder_bias = rng_uniform<double>(rng, d, 1, -0.5, 0.5).col(0);
    return layer;
}

}  // namespace

TEST(Encode, ZeroWeightsGiveHalf) {
    const DaeLayer layer(5, 3);
    Rng rng(1);
    const Matrix y = encode(layer, rng_uniform<double>(rng, 4, 5, -3.0, 3.0));
    EXPECT_EQ(y.rows(), 4);
    EXPECT_EQ(y.cols(), 3);
    EXPECT_TRUE((y.array() == 0.5).all());
}

TEST(Encode, SingleUnit) {
    DaeLayer layer(1, 1);
    layer.weights(0, 0) = 1.0;
    EXPECT_EQ(encode(layer, Matrix::Zero(1, 1))(0, 0), 0.5);
}

TEST(Encode, HandEvaluated) {
    DaeLayer layer(2, 1);
    layer.weights << 1.0, 1.0;
    layer.encoder_bias << std::log(3.0) - 1.0;
    Matrix x(1, 2);
    x << 0.5, 0.5;
    EXPECT_NEAR(encode(layer, x)(0, 0), 0.75, 1e-15);
}

TEST(Encode, ShapeMismatchThrows) {
    const DaeLayer layer(4, 2);
    EXPECT_THROW(encode(layer, Matrix::Zero(3, 5)), ShapeError);
    EXPECT_THROW(decode(layer, Matrix::Zero(3, 4)), ShapeError);
}

TEST(Decode, ZeroWeightsGiveHalf) {
    const DaeLayer layer(6, 2);
    EXPECT_TRUE((decode(layer, Matrix::Constant(3, 2, 0.3)).array() == 0.5).all());
}

TEST(Decode, HandEvaluated) {
    DaeLayer layer(1, 1);
    layer.weights << 2.0;
    layer.decoder_bias << -1.0;
    EXPECT_EQ(decode(layer, Matrix::Constant(1, 1, 0.5))(0, 0), 0.5);
}

TEST(Decode, UsesTransposeOfEncoderWeights) {
    const DaeLayer layer = random_layer(5, 3, 8);
    Rng rng(2);
    const Matrix y = rng_uniform<double>(rng, 4, 3, 0.0, 1.0);
    Matrix expected = oracle::naive_matmul(y, layer.weights);
    expected.rowwise() += layer.decoder_bias.transpose();
    expected = expected.unaryExpr([](double v) { return oracle::scalar_sigmoid(v); });
    EXPECT_LE((decode(layer, y) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Autoencoder, RoundTripShapeAndRange) {
    const DaeLayer layer = random_layer(7, 4, 3, 5.0);
    Rng rng(4);
    const Matrix z = reconstruct(layer, rng_uniform<double>(rng, 9, 7, -2.0, 2.0));
    EXPECT_EQ(z.rows(), 9);
    EXPECT_EQ(z.cols(), 7);
    EXPECT_GT(z.minCoeff(), 0.0);
    EXPECT_LT(z.maxCoeff(), 1.0);
}

TEST(Corrupt, MaskingExtremes) {
    Rng rng(5);
    const Matrix x = rng_uniform<double>(rng, 20, 6, 0.1, 1.0);
    EXPECT_EQ(corrupt(x, CorruptionSpec::masking(0.0), rng), x);
    EXPECT_EQ(corrupt(x, CorruptionSpec::masking(1.0), rng), Matrix::Zero(20, 6));
}

TEST(Corrupt, NoneIsIdentity) {
    Rng rng(6);
    const Matrix x = rng_uniform<double>(rng, 10, 10, -1.0, 1.0);
    EXPECT_EQ(corrupt(x, CorruptionSpec::none(), rng), x);
}

TEST(Corrupt, MaskingLeavesSurvivorsUntouched) {
    Rng rng(7);
    const Matrix x = rng_uniform<double>(rng, 50, 18, 0.1, 1.0);
    const Matrix c = corrupt(x, CorruptionSpec::masking(0.4), rng);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        EXPECT_TRUE(c.data()[i] == 0.0 || c.data()[i] == x.data()[i]);
}

TEST(Corrupt, MaskingFractionConcentrates) {
    Rng rng(8);
    const Matrix c = corrupt<double>(Matrix::Ones(10000, 18), CorruptionSpec::masking(0.4), rng);
    const double zeros = static_cast<double>((c.array() == 0.0).count()) / static_cast<double>(c.size());
    EXPECT_NEAR(zeros, 0.4, 0.01);
}

TEST(Corrupt, GaussianAddsNoise) {
    Rng rng(9);
    const Matrix x = Matrix::Constant(1, 100000, 3.0);
    const Matrix c = corrupt(x, CorruptionSpec::gaussian(0.5), rng);
    const Matrix noise = c - x;
    EXPECT_NEAR(noise.mean(), 0.0, 0.01);
    EXPECT_NEAR(std::sqrt(noise.array().square().mean()), 0.5, 0.01);
}

TEST(Corrupt, RejectsInvalidSpec) {
    Rng rng(1);
    EXPECT_THROW(corrupt<double>(Matrix::Ones(2, 2), CorruptionSpec::masking(1.5), rng), ParameterError);
    EXPECT_THROW(corrupt<double>(Matrix::Ones(2, 2), CorruptionSpec::gaussian(-0.1), rng), ParameterError);
}

TEST(Loss, SquaredErrorCases) {
    Rng rng(10);
    const Matrix x = rng_uniform<double>(rng, 4, 3, 0.0, 1.0);
    EXPECT_EQ(loss(x, x, LossKind::SquaredError), 0.0);
    Matrix a(1, 2), b(1, 2);
    a << 1, 0;
    b << 0, 0;
    EXPECT_EQ(loss(a, b, LossKind::SquaredError), 1.0);
}

TEST(Loss, SquaredErrorMatchesScalarLoop) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = rng_uniform<double>(rng, 7, 5, 0.0, 1.0);
        const Matrix z = rng_uniform<double>(rng, 7, 5, 0.0, 1.0);
        double total = 0.0;
        for (Eigen::Index i = 0; i < 7; ++i) {
            double row = 0.0;
            for (Eigen::Index j = 0; j < 5; ++j)
                row += (x(i, j) - z(i, j)) * (x(i, j) - z(i, j));
            total += row;
        }
        EXPECT_NEAR(loss(x, z, LossKind::SquaredError), total / 7.0, 1e-12);
    }
}

TEST(Loss, CrossEntropyHalf) {
    EXPECT_NEAR(loss<double>(Matrix::Ones(1, 1), Matrix::Constant(1, 1, 0.5), LossKind::CrossEntropy), std::log(2.0),
                1e-15);
}

TEST(Loss, CrossEntropyMinimizedAtTarget) {
    Matrix x(1, 1);
    x << 0.3;
    const double at = loss<double>(x, x, LossKind::CrossEntropy);
    for (double z : {0.1, 0.29, 0.31, 0.7})
        EXPECT_GT(loss<double>(x, Matrix::Constant(1, 1, z), LossKind::CrossEntropy), at);
}

TEST(Loss, CrossEntropyClampsSaturatedReconstruction) {
    const double v = loss<double>(Matrix::Ones(1, 1), Matrix::Zero(1, 1), LossKind::CrossEntropy);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, -std::log(kCrossEntropyClamp), 1e-9);
}

TEST(Loss, Errors) {
    EXPECT_THROW(loss<double>(Matrix::Zero(2, 2), Matrix::Zero(2, 3), LossKind::SquaredError), ShapeError);
    EXPECT_THROW(loss<double>(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 0.5), LossKind::CrossEntropy),
                 ParameterError);
}

TEST(DaeGradients, ZeroAtPerfectReconstruction) {
    const DaeLayer layer(4, 3);  // reconstructs every input as 0.5
    const Matrix x = Matrix::Constant(5, 4, 0.5);
    const auto g = dae_gradients(layer, x, x, LossKind::SquaredError);
    EXPECT_EQ(g.weights, Matrix::Zero(3, 4));
    EXPECT_EQ(g.encoder_bias, Vector::Zero(3));
    EXPECT_EQ(g.decoder_bias, Vector::Zero(4));
}

TEST(DaeGradients, InvariantToDuplicatingBatch) {
    const DaeLayer layer = random_layer(6, 4, 12);
    Rng rng(13);
    const Matrix x = rng_uniform<double>(rng, 3, 6, 0.0, 1.0);
    const Matrix noisy = corrupt(x, CorruptionSpec::masking(0.3), rng);
    const auto g1 = dae_gradients(layer, x, noisy, LossKind::SquaredError);
    const auto g2 = dae_gradients(layer, vstack(x, x), vstack(noisy, noisy), LossKind::SquaredError);
    EXPECT_LE((g1.weights - g2.weights).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((g1.encoder_bias - g2.encoder_bias).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((g1.decoder_bias - g2.decoder_bias).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DaeGradients, MatchFiniteDifferences) {
    Rng rng(14);
    for (LossKind kind : {LossKind::SquaredError, LossKind::CrossEntropy}) {
        for (const CorruptionSpec& spec : {CorruptionSpec::masking(0.3), CorruptionSpec::gaussian(0.2)}) {
            for (int trial = 0; trial < 20; ++trial) {
                const DaeLayer layer = random_layer(6, 4, 100 + static_cast<std::uint64_t>(trial));
                const Matrix x = rng_uniform<double>(rng, 3, 6, 0.0, 1.0);
                const Matrix noisy = corrupt(x, spec, rng);
                EXPECT_LT(oracle::dae_gradient_error(layer, x, noisy, kind), 1e-4)
                    << to_string(kind) << " " << to_string(spec.kind) << " trial " << trial;
            }
        }
    }
}

TEST(DaeGradients, ShapeMismatchThrows) {
    const DaeLayer layer(4, 2);
    EXPECT_THROW(dae_gradients<double>(layer, Matrix::Zero(3, 4), Matrix::Zero(2, 4), LossKind::SquaredError),
                 ShapeError);
}

TEST(TrainDae, ZeroLearningRateLeavesParameters) {
    DaeLayer layer = random_layer(5, 3, 15);
    const DaeLayer before = layer;
    Rng rng(16);
    const Matrix data = rng_uniform<double>(rng, 30, 5, 0.0, 1.0);
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.epochs = 1;
    train_dae(layer, data, CorruptionSpec::masking(0.4), LossKind::SquaredError, cfg, rng);
    EXPECT_EQ(layer.weights, before.weights);
    EXPECT_EQ(layer.encoder_bias, before.encoder_bias);
    EXPECT_EQ(layer.decoder_bias, before.decoder_bias);
}

TEST(TrainDae, RejectsZeroEpochsAndEmptyData) {
    DaeLayer layer(5, 3);
    Rng rng(1);
    TrainConfig cfg;
    cfg.epochs = 0;
    EXPECT_THROW(train_dae<double>(layer, Matrix::Ones(4, 5), CorruptionSpec::none(), LossKind::SquaredError, cfg, rng),
                 ParameterError);
    cfg.epochs = 1;
    EXPECT_THROW(train_dae<double>(layer, Matrix(0, 5), CorruptionSpec::none(), LossKind::SquaredError, cfg, rng),
                 ParameterError);
}

TEST(TrainDae, DeterministicPerSeed) {
    SynthParams params;
    params.n_labeled = 2;
    params.n_unlabeled = 100;
    const Matrix data = synth_generate(params).unlabeled_x;
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.momentum = 0.1;
    cfg.epochs = 5;
    DaeLayer runs[2];
    for (auto& layer : runs) {
        Rng rng(99);
        layer = DaeLayer::initialized(18, 14, rng);
        train_dae(layer, data, CorruptionSpec::masking(0.4), LossKind::SquaredError, cfg, rng);
    }
    EXPECT_EQ(runs[0].weights, runs[1].weights);
    EXPECT_EQ(runs[0].decoder_bias, runs[1].decoder_bias);
}

TEST(TrainDae, LossDecreases) {
    SynthParams params;
    params.n_labeled = 2;
    params.n_unlabeled = 200;
    const Matrix data = synth_generate(params).unlabeled_x;
    Rng rng(21);
    DaeLayer layer = DaeLayer::initialized(18, 14, rng);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.momentum = 0.1;
    cfg.epochs = 50;
    const TrainReport report = train_dae(layer, data, CorruptionSpec::masking(0.4), LossKind::SquaredError, cfg, rng);
    ASSERT_EQ(report.loss.size(), 50u);
    EXPECT_LT(report.loss.back(), report.loss.front());
    EXPECT_TRUE(layer.finite());
}

TEST(TrainDae, CrossEntropyOnUnitInterval) {
    Rng rng(22);
    const Matrix data = rng_uniform<double>(rng, 100, 8, 0.0, 1.0);
    DaeLayer layer = DaeLayer::initialized(8, 5, rng);
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 20;
    const auto report = train_dae(layer, data, CorruptionSpec::gaussian(0.1), LossKind::CrossEntropy, cfg, rng);
    EXPECT_LT(report.loss.back(), report.loss.front());
}
