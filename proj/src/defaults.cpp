#include "sdae/defaults.hpp"

#include "sdae/data.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

namespace sdae {

std::vector<LayerSpec> default_layer_specs() {
    const auto level = [](Eigen::Index in, Eigen::Index hidden, double nu, double lr, double momentum) {
        LayerSpec spec;
        spec.input_dim = in;
        spec.hidden_dim = hidden;
        spec.corruption = CorruptionSpec::masking(nu);
        spec.loss = LossKind::SquaredError;
        spec.train.learning_rate = lr;
        spec.train.momentum = momentum;
        spec.train.l2_penalty = 0.0;
        spec.train.epochs = kDefaultPretrainEpochs;
        spec.train.batch_size = kDefaultBatchSize;
        return spec;
    };
    return {level(18, 14, 0.4, 1.0, 0.1), level(14, 8, 0.1, 0.5, 0.1)};
}

TrainConfig default_finetune_config() {
    TrainConfig cfg;
    cfg.learning_rate = 1.0;
    cfg.momentum = 0.5;
    cfg.l2_penalty = 0.0007;
    cfg.epochs = 2000;
    cfg.batch_size = kDefaultBatchSize;
    return cfg;
}

TrainConfig default_svm_config() {
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.momentum = 0.0;
    cfg.l2_penalty = 0.001;
    cfg.epochs = 200;
    cfg.batch_size = kDefaultBatchSize;
    return cfg;
}

std::vector<Eigen::Index> default_architecture() { return {18, 14, 8, 1}; }

namespace {

/// Shortest fixed-notation decimal, e.g. 0.0007 rather than 7e-04.
std::string plain(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    return ec == std::errc{} ? std::string(buf, ptr) : format_double(v);
}

std::string arch_string(const std::vector<Eigen::Index>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i)
        out += (i ? "-" : "") + std::to_string(dims[i]);
    return out;
}

}  // namespace

std::string render_default_config() {
    std::ostringstream out;
    out << std::left;
    out << "Stacked DAE (pretraining)\n";
    out << std::setw(11) << "DAE level" << std::setw(17) << "#Hidden neurons" << std::setw(22)
        << "Input noise fraction" << std::setw(15) << "Learning rate" << "momentum\n";
    const auto specs = default_layer_specs();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        out << std::setw(11) << i + 1 << std::setw(17) << specs[i].hidden_dim << std::setw(22)
            << plain(specs[i].corruption.nu) << std::setw(15) << plain(specs[i].train.learning_rate)
            << plain(specs[i].train.momentum) << '\n';
    }
    out << '\n';

    const TrainConfig ft = default_finetune_config();
    out << "Feed-forward network (fine-tuning)\n";
    out << std::setw(14) << "Architecture" << std::setw(21) << "Activation function" << std::setw(9) << "#epochs"
        << std::setw(19) << "L2 weight penalty" << std::setw(15) << "Learning rate" << "momentum\n";
    out << std::setw(14) << arch_string(default_architecture()) << std::setw(21) << "sigmoid" << std::setw(9)
        << ft.epochs << std::setw(19) << plain(ft.l2_penalty) << std::setw(15)
        << plain(ft.learning_rate) << plain(ft.momentum) << '\n';
    out << '\n';

    const TrainConfig svm = default_svm_config();
    out << "Other defaults\n";
    out << "  pretrain epochs per layer : " << kDefaultPretrainEpochs << '\n';
    out << "  pretrain corruption       : masking\n";
    out << "  gaussian sigma            : " << plain(kDefaultGaussianSigma) << '\n';
    out << "  reconstruction loss       : " << to_string(specs.front().loss) << '\n';
    out << "  fine-tune loss            : " << to_string(LossKind::CrossEntropy) << '\n';
    out << "  batch size                : " << kDefaultBatchSize << '\n';
    out << "  k-folds                   : " << kDefaultFolds << '\n';
    out << "  knn k                     : " << kDefaultKnnK << '\n';
    out << "  svm learning rate         : " << plain(svm.learning_rate) << '\n';
    out << "  svm l2 penalty            : " << plain(svm.l2_penalty) << '\n';
    out << "  svm epochs                : " << svm.epochs << '\n';
    out << "  negative ratio            : " << plain(kDefaultNegativeRatio) << ":1\n";
    out << "  seed                      : 42\n";
    return out.str();
}

}  // namespace sdae
