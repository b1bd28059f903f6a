#pragma once

#include "sdae/linalg.hpp"
#include "sdae/network.hpp"
#include "sdae/train_config.hpp"

#include <string>
#include <vector>

namespace sdae {

/// k-nearest-neighbour classifier under Euclidean distance.
struct KnnModel {
    Matrix train_x;
    Labels train_y;
    std::size_t k = 5;

    void validate() const;
};

/// Majority vote among the k nearest training rows. Equal distances are
/// ordered by lower training index; an even split of votes goes to 1.
Labels knn_predict(const KnnModel& model, const Matrix& x);

/// Linear classifier sign(w.x + b) trained on the hinge loss.
struct LinearSvm {
    Vector w;
    double b = 0.0;
    /// Training data had a single class; the model predicts it constantly.
    bool degenerate = false;
};

/// l2 * |w|^2 + mean hinge loss, labels mapped 0 -> -1 and 1 -> +1.
double svm_objective(const LinearSvm& model, const Matrix& x, const Labels& y, double l2);

/// Mini-batch subgradient descent on svm_objective with step `cfg.learning_rate`,
/// penalty `cfg.l2_penalty` and rows reshuffled per epoch from `cfg.seed`.
/// Momentum is not used. Returns the objective after each epoch in `trace` when given.
LinearSvm svm_train(const Matrix& x, const Labels& y, const TrainConfig& cfg, std::vector<double>* trace = nullptr);

/// sign(w.x + b) mapped back to {0, 1}; a zero margin predicts 1.
Labels svm_predict(const LinearSvm& model, const Matrix& x);

/// The classifier architecture trained from random initialization, no pretraining.
FeedForwardNet mlp_baseline(const Matrix& x, const Labels& y, const std::vector<Eigen::Index>& dims,
                            const TrainConfig& cfg, Rng& init_rng, TrainReport* report = nullptr);

}  // namespace sdae
