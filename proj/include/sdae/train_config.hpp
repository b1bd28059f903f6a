#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sdae {

/// Hyperparameters for one SGD run (pretraining a layer, fine-tuning, or a baseline).
struct TrainConfig {
    double learning_rate = 1.0;
    double momentum = 0.5;
    double l2_penalty = 0.0;  // weights only, never biases
    std::size_t epochs = 100;
    std::size_t batch_size = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Loss and accuracy recorded once per epoch.
struct TrainReport {
    std::vector<double> loss;
    std::vector<double> accuracy;  // empty for unsupervised runs
};

}  // namespace sdae
