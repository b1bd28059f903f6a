#include "sdae/train_config.hpp"

#include "sdae/linalg.hpp"

#include <cmath>

namespace sdae {

void TrainConfig::validate() const {
    if (!(std::isfinite(learning_rate) && learning_rate >= 0.0))
        throw ParameterError("learning rate must be finite and non-negative");
    if (!(momentum >= 0.0 && momentum < 1.0))
        throw ParameterError("momentum must lie in [0, 1)");
    if (!(std::isfinite(l2_penalty) && l2_penalty >= 0.0))
        throw ParameterError("L2 penalty must be finite and non-negative");
    if (epochs < 1)
        throw ParameterError("epochs must be at least 1");
    if (batch_size < 1)
        throw ParameterError("batch size must be at least 1");
}

}  // namespace sdae
