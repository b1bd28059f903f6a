#pragma once

#include "sdae/network.hpp"
#include "sdae/train_config.hpp"

#include <string>
#include <vector>

namespace sdae {

inline constexpr std::size_t kDefaultPretrainEpochs = 100;
inline constexpr std::size_t kDefaultBatchSize = 10;
inline constexpr std::size_t kDefaultKnnK = 5;
inline constexpr std::size_t kDefaultFolds = 5;
inline constexpr double kDefaultGaussianSigma = 0.1;
inline constexpr double kDefaultNegativeRatio = 1.0;

/// Two-level stack 18 -> 14 -> 8, masking noise, squared-error reconstruction.
///   level 1: 14 hidden, noise fraction 0.4, learning rate 1,   momentum 0.1
///   level 2:  8 hidden, noise fraction 0.1, learning rate 0.5, momentum 0.1
std::vector<LayerSpec> default_layer_specs();

/// 2000 epochs, L2 0.0007, learning rate 1, momentum 0.5.
TrainConfig default_finetune_config();

TrainConfig default_svm_config();

/// {18, 14, 8, 1}
std::vector<Eigen::Index> default_architecture();

/// Every default, as printed by `show-config`.
std::string render_default_config();

}  // namespace sdae
