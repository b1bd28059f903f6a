#include "sdae/baselines.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace sdae {

void KnnModel::validate() const {
    if (train_x.rows() == 0)
        throw ParameterError("knn: empty training set");
    if (static_cast<std::size_t>(train_x.rows()) != train_y.size())
        throw ShapeError("knn: " + std::to_string(train_x.rows()) + " rows but " + std::to_string(train_y.size()) +
                         " labels");
    if (k == 0 || k > train_y.size())
        throw ParameterError("knn: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(train_y.size()) +
                             "]");
}

Labels knn_predict(const KnnModel& model, const Matrix& x) {
    model.validate();
    if (x.cols() != model.train_x.cols())
        throw ShapeError("knn: query " + shape_string(x) + " vs training " + shape_string(model.train_x));

    const auto n = static_cast<std::size_t>(model.train_x.rows());
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    Labels out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index q = 0; q < x.rows(); ++q) {
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = (model.train_x.row(static_cast<Eigen::Index>(i)) - x.row(q)).squaredNorm();
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto nearer = [&](std::size_t a, std::size_t b) {
            return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
        };
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(model.k), order.end(), nearer);
        std::size_t votes = 0;
        for (std::size_t i = 0; i < model.k; ++i)
            votes += model.train_y[order[i]] == 1 ? 1 : 0;
        out[static_cast<std::size_t>(q)] = 2 * votes >= model.k ? 1 : 0;
    }
    return out;
}

namespace {

double signed_label(int y) { return y == 1 ? 1.0 : -1.0; }

}  // namespace

double svm_objective(const LinearSvm& model, const Matrix& x, const Labels& y, double l2) {
    if (static_cast<std::size_t>(x.rows()) != y.size())
        throw ShapeError("svm: rows and labels differ in count");
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double margin = signed_label(y[static_cast<std::size_t>(i)]) * (x.row(i).dot(model.w) + model.b);
        hinge += std::max(0.0, 1.0 - margin);
    }
    const double mean_hinge = x.rows() > 0 ? hinge / static_cast<double>(x.rows()) : 0.0;
    return l2 * model.w.squaredNorm() + mean_hinge;
}

LinearSvm svm_train(const Matrix& x, const Labels& y, const TrainConfig& cfg, std::vector<double>* trace) {
    cfg.validate();
    if (x.rows() == 0)
        throw ParameterError("svm: empty training set");
    if (static_cast<std::size_t>(x.rows()) != y.size())
        throw ShapeError("svm: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) + " labels");

    LinearSvm model;
    model.w = Vector::Zero(x.cols());
    const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (positives == 0 || positives == y.size()) {
        std::clog << "warning: svm training data has a single class; using a constant predictor\n";
        model.degenerate = true;
        model.b = positives == 0 ? -1.0 : 1.0;
        return model;
    }

    Rng shuffle_rng = Rng::derive(cfg.seed, StreamPurpose::Shuffle);
    const auto n = y.size();
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<std::size_t> order = shuffle_rng.permutation(n);
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            Vector gw = 2.0 * cfg.l2_penalty * model.w;
            double gb = 0.0;
            const double inv_b = 1.0 / static_cast<double>(stop - start);
            for (std::size_t p = start; p < stop; ++p) {
                const auto i = static_cast<Eigen::Index>(order[p]);
                const double t = signed_label(y[order[p]]);
                if (t * (x.row(i).dot(model.w) + model.b) < 1.0) {
                    gw -= inv_b * t * x.row(i).transpose();
                    gb -= inv_b * t;
                }
            }
            model.w -= cfg.learning_rate * gw;
            model.b -= cfg.learning_rate * gb;
        }
        if (!all_finite(model.w) || !std::isfinite(model.b))
            throw NumericError("svm: parameters diverged at epoch " + std::to_string(epoch + 1));
        if (trace)
            trace->push_back(svm_objective(model, x, y, cfg.l2_penalty));
    }
    return model;
}

Labels svm_predict(const LinearSvm& model, const Matrix& x) {
    if (x.cols() != model.w.size())
        throw ShapeError("svm: query " + shape_string(x) + " vs " + std::to_string(model.w.size()) + " weights");
    Labels out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        out[static_cast<std::size_t>(i)] = x.row(i).dot(model.w) + model.b >= 0.0 ? 1 : 0;
    return out;
}

FeedForwardNet mlp_baseline(const Matrix& x, const Labels& y, const std::vector<Eigen::Index>& dims,
                            const TrainConfig& cfg, Rng& init_rng, TrainReport* report) {
    FeedForwardNet net = random_net<double>(dims, init_rng);
    TrainReport r = finetune(net, x, y, cfg);
    if (report)
        *report = std::move(r);
    return net;
}

}  // namespace sdae
