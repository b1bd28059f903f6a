#pragma once

#include "sdae/data.hpp"
#include "sdae/linalg.hpp"
#include "sdae/network.hpp"
#include "sdae/train_config.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sdae {

/// Confusion counts and the ratios derived from them. Precision is 0 when
/// nothing was predicted positive; recall is 0 when nothing is truly positive.
struct Metrics {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

Metrics metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn);
Metrics compute_metrics(const Labels& pred, const Labels& truth);

/// Fold index per labeled sample.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Stratified shuffled k-fold assignment.
///
/// Each class is shuffled separately and dealt round-robin over the folds; the
/// second class continues dealing where the first stopped, so both per-class
/// and total fold sizes differ by at most one.
FoldPlan kfold_split(const Labels& labels, std::size_t k, std::uint64_t seed);

enum class Method { Knn, Svm, Mlp, Proposed };

const char* method_name(Method m);  // "kNN", "SVM", "MLP", "Proposed method"
const char* method_key(Method m);   // "knn", "svm", "mlp", "proposed"
Method parse_method(const std::string& key);
std::vector<Method> all_methods();

struct ComparisonConfig {
    std::vector<Method> methods = all_methods();
    std::size_t k = 5;
    std::uint64_t seed = 42;
    std::size_t knn_k = 5;
    TrainConfig svm;
    std::vector<LayerSpec> pretrain_specs;
    TrainConfig finetune;
    /// Average per-fold metrics (false) or score all pooled fold predictions (true).
    bool pooled = false;
    /// How the negatives were built; echoed into the report.
    std::string negatives_note = "as labeled in the input";
    /// Called with (method, fold, net) for every trained MLP / proposed net.
    std::function<void(Method, std::size_t, const FeedForwardNet&)> on_net;
};

struct MethodResult {
    Method method = Method::Knn;
    std::vector<Metrics> folds;
    Metrics mean;
    std::size_t trainings = 0;
};

struct ComparisonReport {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool pooled = false;
    std::string negatives_note;
    std::size_t labeled = 0;
    std::size_t positives = 0;
    std::size_t unlabeled = 0;
    std::vector<MethodResult> results;
};

/// Runs every requested method over the same stratified folds.
///
/// Per fold, min-max statistics are fitted on the training-fold rows plus the
/// unlabeled rows, and applied to train, test and unlabeled alike. The
/// proposed method pretrains on the normalized unlabeled rows together with
/// the training-fold features, unrolls, then fine-tunes exactly like the MLP
/// baseline. Every fold draws from streams derived from (seed, fold).
ComparisonReport run_comparison(const Dataset& dataset, const ComparisonConfig& config);

/// Aligned text table: Predictor, Accuracy (percent), Precision, Recall.
std::string render_report_text(const ComparisonReport& report);

/// method,fold,accuracy,precision,recall plus one "mean" row per method.
std::string render_report_csv(const ComparisonReport& report);

}  // namespace sdae
