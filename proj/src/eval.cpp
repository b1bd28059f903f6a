#include "sdae/eval.hpp"

#include "sdae/baselines.hpp"
#include "sdae/defaults.hpp"
#include "sdae/rng.hpp"

#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>

namespace sdae {

Metrics metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
    Metrics m{tp, tn, fp, fn, 0.0, 0.0, 0.0};
    const std::size_t total = tp + tn + fp + fn;
    m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
    m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    return m;
}

Metrics compute_metrics(const Labels& pred, const Labels& truth) {
    if (pred.size() != truth.size())
        throw ShapeError("compute_metrics: " + std::to_string(pred.size()) + " predictions vs " +
                         std::to_string(truth.size()) + " labels");
    if (pred.empty())
        throw ParameterError("compute_metrics: no predictions");
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1)
            (truth[i] == 1 ? tp : fp) += 1;
        else
            (truth[i] == 1 ? fn : tn) += 1;
    }
    return metrics_from_counts(tp, tn, fp, fn);
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold)
            out.push_back(i);
    return out;
}

FoldPlan kfold_split(const Labels& labels, std::size_t k, std::uint64_t seed) {
    if (k < 2)
        throw ParameterError("kfold: k must be at least 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw ParameterError("kfold: labels must be 0 or 1");
        by_class[labels[i]].push_back(i);
    }
    for (int c : {1, 0}) {
        if (by_class[c].size() < k)
            throw ParameterError("kfold: class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                 " members, fewer than k=" + std::to_string(k));
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(labels.size(), 0);
    Rng rng = Rng::derive(seed, StreamPurpose::Folds);
    std::size_t next = 0;
    for (int c : {1, 0}) {
        rng.shuffle(by_class[c]);
        for (std::size_t idx : by_class[c]) {
            plan.assignments[idx] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

const char* method_name(Method m) {
    switch (m) {
    case Method::Knn: return "kNN";
    case Method::Svm: return "SVM";
    case Method::Mlp: return "MLP";
    case Method::Proposed: return "Proposed method";
    }
    return "?";
}

const char* method_key(Method m) {
    switch (m) {
    case Method::Knn: return "knn";
    case Method::Svm: return "svm";
    case Method::Mlp: return "mlp";
    case Method::Proposed: return "proposed";
    }
    return "?";
}

Method parse_method(const std::string& key) {
    for (Method m : all_methods())
        if (key == method_key(m))
            return m;
    throw ParameterError("unknown method '" + key + "' (expected knn, svm, mlp or proposed)");
}

std::vector<Method> all_methods() { return {Method::Knn, Method::Svm, Method::Mlp, Method::Proposed}; }

namespace {

Labels gather_labels(const Labels& y, const std::vector<std::size_t>& idx) {
    Labels out;
    out.reserve(idx.size());
    for (std::size_t i : idx)
        out.push_back(y[i]);
    return out;
}

std::vector<Eigen::Index> net_dims(const ComparisonConfig& config, Eigen::Index input_dim) {
    std::vector<Eigen::Index> dims{input_dim};
    for (const auto& spec : config.pretrain_specs)
        dims.push_back(spec.hidden_dim);
    dims.push_back(1);
    return dims;
}

}  // namespace

ComparisonReport run_comparison(const Dataset& dataset, const ComparisonConfig& config) {
    dataset.validate();
    if (dataset.labeled_count() == 0)
        throw ParameterError("comparison: dataset has no labeled rows");
    if (config.methods.empty())
        throw ParameterError("comparison: no methods selected");
    const bool needs_net = std::any_of(config.methods.begin(), config.methods.end(),
                                       [](Method m) { return m == Method::Mlp || m == Method::Proposed; });
    if (needs_net) {
        validate_chain(config.pretrain_specs);
        if (config.pretrain_specs.empty())
            throw ParameterError("comparison: at least one hidden layer is required");
        if (config.pretrain_specs.front().input_dim != dataset.dim)
            throw ShapeError("comparison: layers expect input dim " +
                             std::to_string(config.pretrain_specs.front().input_dim) + " but data has dim " +
                             std::to_string(dataset.dim));
    }

    const FoldPlan plan = kfold_split(dataset.labeled_y, config.k, config.seed);

    ComparisonReport report;
    report.k = config.k;
    report.seed = config.seed;
    report.pooled = config.pooled;
    report.negatives_note = config.negatives_note;
    report.labeled = static_cast<std::size_t>(dataset.labeled_count());
    report.positives = dataset.positive_count();
    report.unlabeled = static_cast<std::size_t>(dataset.unlabeled_count());
    for (Method m : config.methods)
        report.results.push_back({m, {}, {}, 0});

    std::map<Method, std::pair<Labels, Labels>> pooled;  // method -> (pred, truth)

    for (std::size_t fold = 0; fold < config.k; ++fold) {
        const auto train_idx = plan.train_indices(fold);
        const auto test_idx = plan.test_indices(fold);
        const Labels train_y = gather_labels(dataset.labeled_y, train_idx);
        const Labels test_y = gather_labels(dataset.labeled_y, test_idx);
        const Matrix raw_train = gather_rows(dataset.labeled_x, train_idx);

        const NormStats stats = fit_normalize(vstack(raw_train, dataset.unlabeled_x));
        const Matrix train_x = apply_normalize(stats, raw_train);
        const Matrix test_x = apply_normalize(stats, gather_rows(dataset.labeled_x, test_idx));

        TrainConfig ft = config.finetune;
        ft.seed = Rng::derive_seed(config.seed, StreamPurpose::Shuffle, fold);

        for (MethodResult& result : report.results) {
            Labels pred;
            switch (result.method) {
            case Method::Knn:
                pred = knn_predict(KnnModel{train_x, train_y, config.knn_k}, test_x);
                break;
            case Method::Svm: {
                TrainConfig svm_cfg = config.svm;
                svm_cfg.seed = ft.seed;
                pred = svm_predict(svm_train(train_x, train_y, svm_cfg), test_x);
                break;
            }
            case Method::Mlp: {
                Rng init_rng = Rng::derive(config.seed, StreamPurpose::Init, fold);
                const FeedForwardNet net = mlp_baseline(train_x, train_y, net_dims(config, dataset.dim), ft, init_rng);
                pred = predict(net, test_x).labels;
                if (config.on_net)
                    config.on_net(result.method, fold, net);
                break;
            }
            case Method::Proposed: {
                const Matrix unlabeled = dataset.unlabeled_count() > 0
                                             ? apply_normalize(stats, dataset.unlabeled_x)
                                             : Matrix(0, dataset.dim);
                Rng pre_rng = Rng::derive(config.seed, StreamPurpose::Corruption, fold);
                const auto pre = pretrain(config.pretrain_specs, vstack(unlabeled, train_x), pre_rng);
                Rng init_rng = Rng::derive(config.seed, StreamPurpose::Init, fold);
                FeedForwardNet net = unroll(pre.stack, init_rng);
                finetune(net, train_x, train_y, ft);
                pred = predict(net, test_x).labels;
                if (config.on_net)
                    config.on_net(result.method, fold, net);
                break;
            }
            }
            result.trainings += 1;
            result.folds.push_back(compute_metrics(pred, test_y));
            auto& [all_pred, all_truth] = pooled[result.method];
            all_pred.insert(all_pred.end(), pred.begin(), pred.end());
            all_truth.insert(all_truth.end(), test_y.begin(), test_y.end());
        }
    }

    for (MethodResult& result : report.results) {
        if (config.pooled) {
            const auto& [all_pred, all_truth] = pooled[result.method];
            result.mean = compute_metrics(all_pred, all_truth);
            continue;
        }
        Metrics mean;
        for (const Metrics& m : result.folds) {
            mean.tp += m.tp;
            mean.tn += m.tn;
            mean.fp += m.fp;
            mean.fn += m.fn;
            mean.accuracy += m.accuracy;
            mean.precision += m.precision;
            mean.recall += m.recall;
        }
        const auto n = static_cast<double>(result.folds.size());
        mean.accuracy /= n;
        mean.precision /= n;
        mean.recall /= n;
        result.mean = mean;
    }
    return report;
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

std::string exact(double v) { return format_double(v); }

}  // namespace

std::string render_report_text(const ComparisonReport& report) {
    std::ostringstream out;
    out << "# " << report.k << "-fold stratified cross-validation, seed " << report.seed << ", "
        << (report.pooled ? "pooled" : "mean over folds") << '\n';
    out << "# labeled " << report.labeled << " (" << report.positives << " positive), unlabeled " << report.unlabeled
        << ", negatives " << report.negatives_note << '\n';
    out << std::left << std::setw(18) << "Predictor" << std::setw(10) << "Accuracy" << std::setw(11) << "Precision"
        << "Recall\n";
    for (const MethodResult& r : report.results) {
        out << std::setw(18) << method_name(r.method) << std::setw(10) << fixed(100.0 * r.mean.accuracy, 1) + "%"
            << std::setw(11) << fixed(r.mean.precision, 2) << fixed(r.mean.recall, 2) << '\n';
    }
    return out.str();
}

std::string render_report_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "method,fold,accuracy,precision,recall\n";
    for (const MethodResult& r : report.results) {
        for (std::size_t f = 0; f < r.folds.size(); ++f)
            out << method_key(r.method) << ',' << f + 1 << ',' << exact(r.folds[f].accuracy) << ','
                << exact(r.folds[f].precision) << ',' << exact(r.folds[f].recall) << '\n';
    }
    for (const MethodResult& r : report.results)
        out << method_key(r.method) << ",mean," << exact(r.mean.accuracy) << ',' << exact(r.mean.precision) << ','
            << exact(r.mean.recall) << '\n';
    return out.str();
}

}  // namespace sdae
