// Command-line driver: synthetic data, layer-wise pretraining, fine-tuning,
// k-fold comparison against baselines, and filter visualization.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 input/output error
// (unreadable or malformed files), 4 numeric failure (training diverged).

#include "sdae/baselines.hpp"
#include "sdae/data.hpp"
#include "sdae/defaults.hpp"
#include "sdae/eval.hpp"
#include "sdae/model_io.hpp"
#include "sdae/network.hpp"
#include "sdae/pgm.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sdae;

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3, kNumericError = 4 };

/// Data-source flags shared by pretrain, train and evaluate.
struct DataOptions {
    std::string data;
    std::string unlabeled;
    bool skip_header = false;
    bool no_normalize = false;
};

/// Stack-shape and pretraining flags.
struct StackOptions {
    std::vector<Eigen::Index> layers{18, 14, 8};
    std::string noise_kind = "masking";
    std::vector<double> noise_fraction{0.4, 0.1};
    double sigma = kDefaultGaussianSigma;
    std::vector<double> lr{1.0, 0.5};
    std::vector<double> momentum{0.1, 0.1};
    std::size_t epochs = kDefaultPretrainEpochs;
    std::size_t batch_size = kDefaultBatchSize;
    std::string loss = "squared_error";
};

struct FinetuneOptions {
    double lr = 1.0;
    double momentum = 0.5;
    double l2 = 0.0007;
    std::size_t epochs = 2000;
    std::size_t batch_size = kDefaultBatchSize;
};

void add_data_flags(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--data", opts.data, "CSV of features with a trailing 1/0/? label column")->required();
    cmd->add_option("--unlabeled", opts.unlabeled, "extra CSV of unlabeled feature rows (no label column)");
    cmd->add_flag("--skip-header", opts.skip_header, "ignore the first non-comment line of each CSV");
    cmd->add_flag("--no-normalize", opts.no_normalize, "use features as given instead of min-max scaling");
}

void add_stack_flags(CLI::App* cmd, StackOptions& opts, const std::string& prefix) {
    cmd->add_option("--layers", opts.layers, "layer widths, input first")->delimiter(',');
    cmd->add_option("--noise-kind", opts.noise_kind, "masking | gaussian | none")
        ->check(CLI::IsMember({"masking", "gaussian", "none"}));
    cmd->add_option("--noise-fraction", opts.noise_fraction, "masking fraction per layer")->delimiter(',');
    cmd->add_option("--sigma", opts.sigma, "gaussian corruption std");
    cmd->add_option("--" + prefix + "lr", opts.lr, "pretraining learning rate per layer")->delimiter(',');
    cmd->add_option("--" + prefix + "momentum", opts.momentum, "pretraining momentum per layer")->delimiter(',');
    cmd->add_option("--" + prefix + "epochs", opts.epochs, "pretraining epochs per layer");
    cmd->add_option("--" + prefix + "batch-size", opts.batch_size, "pretraining mini-batch size");
    cmd->add_option("--loss", opts.loss, "reconstruction loss")
        ->check(CLI::IsMember({"squared_error", "cross_entropy"}));
}

void add_finetune_flags(CLI::App* cmd, FinetuneOptions& opts) {
    cmd->add_option("--lr", opts.lr, "fine-tuning learning rate");
    cmd->add_option("--momentum", opts.momentum, "fine-tuning momentum");
    cmd->add_option("--l2", opts.l2, "L2 weight penalty");
    cmd->add_option("--epochs", opts.epochs, "fine-tuning epochs");
    cmd->add_option("--batch-size", opts.batch_size, "fine-tuning mini-batch size");
}

/// A per-layer list given once applies to every layer.
double per_layer(const std::vector<double>& values, std::size_t i, const char* flag) {
    if (values.size() == 1)
        return values[0];
    if (i >= values.size())
        throw ParameterError(std::string(flag) + ": no value for layer " + std::to_string(i + 1));
    return values[i];
}

std::vector<LayerSpec> build_specs(const StackOptions& opts) {
    if (opts.layers.size() < 2)
        throw ParameterError("--layers needs at least an input and one hidden width");
    const std::size_t levels = opts.layers.size() - 1;
    for (const auto* list : {&opts.noise_fraction, &opts.lr, &opts.momentum})
        if (list->size() != 1 && list->size() < levels)
            throw ParameterError("per-layer option lists must have one value or one per layer");
    std::vector<LayerSpec> specs;
    for (std::size_t i = 0; i < levels; ++i) {
        LayerSpec spec;
        spec.input_dim = opts.layers[i];
        spec.hidden_dim = opts.layers[i + 1];
        if (opts.noise_kind == "masking")
            spec.corruption = CorruptionSpec::masking(per_layer(opts.noise_fraction, i, "--noise-fraction"));
        else if (opts.noise_kind == "gaussian")
            spec.corruption = CorruptionSpec::gaussian(opts.sigma);
        else
            spec.corruption = CorruptionSpec::none();
        spec.loss = opts.loss == "cross_entropy" ? LossKind::CrossEntropy : LossKind::SquaredError;
        spec.train.learning_rate = per_layer(opts.lr, i, "--lr");
        spec.train.momentum = per_layer(opts.momentum, i, "--momentum");
        spec.train.epochs = opts.epochs;
        spec.train.batch_size = opts.batch_size;
        spec.corruption.validate();
        spec.train.validate();
        specs.push_back(spec);
    }
    validate_chain(specs);
    return specs;
}

TrainConfig build_finetune(const FinetuneOptions& opts, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.learning_rate = opts.lr;
    cfg.momentum = opts.momentum;
    cfg.l2_penalty = opts.l2;
    cfg.epochs = opts.epochs;
    cfg.batch_size = opts.batch_size;
    cfg.seed = Rng::derive_seed(seed, StreamPurpose::Shuffle);
    cfg.validate();
    return cfg;
}

Dataset load_dataset(const DataOptions& opts) {
    CsvOptions csv;
    csv.skip_header = opts.skip_header;
    Dataset ds = opts.unlabeled.empty() ? load_csv(opts.data, csv) : load_csv_pair(opts.data, opts.unlabeled, csv);
    ds.validate();
    if (ds.dim == 0)
        throw DataError("'" + opts.data + "' contains no rows");
    return ds;
}

/// Features of every row (labeled first), and the scaling fitted on them.
struct Prepared {
    Matrix all_x;
    Matrix labeled_x;
    std::optional<NormStats> stats;
};

Prepared prepare(const Dataset& ds, bool no_normalize) {
    Prepared p;
    p.all_x = vstack(ds.labeled_x, ds.unlabeled_x);
    p.labeled_x = ds.labeled_x;
    if (!no_normalize && p.all_x.rows() > 0) {
        p.stats = fit_normalize(p.all_x);
        p.all_x = apply_normalize(*p.stats, p.all_x);
        if (p.labeled_x.rows() > 0)
            p.labeled_x = apply_normalize(*p.stats, p.labeled_x);
    }
    return p;
}

std::string trace_path(const std::string& explicit_path, const std::string& out) {
    return explicit_path.empty() ? out + ".trace.csv" : explicit_path;
}

int run_synth(const SynthParams& params, const std::string& out) {
    const Dataset ds = synth_generate(params);
    save_csv(out, ds);
    std::cout << "wrote " << ds.labeled_count() + ds.unlabeled_count() << " rows (" << ds.labeled_count()
              << " labeled, " << ds.unlabeled_count() << " unlabeled) to " << out << '\n';
    return kOk;
}

int run_pretrain(const DataOptions& data, const StackOptions& stack_opts, std::uint64_t seed, const std::string& out,
                 const std::string& trace) {
    const auto specs = build_specs(stack_opts);
    const Dataset ds = load_dataset(data);
    if (ds.dim != specs.front().input_dim)
        throw ShapeError("layers expect input dim " + std::to_string(specs.front().input_dim) + " but data has dim " +
                         std::to_string(ds.dim));
    const Prepared p = prepare(ds, data.no_normalize);
    if (p.all_x.rows() == 0)
        throw ParameterError("no rows to pretrain on");

    Rng rng = Rng::derive(seed, StreamPurpose::Corruption);
    const auto result = pretrain(specs, p.all_x, rng);
    save_stack(out, result.stack);

    std::ostringstream t;
    t << "layer,epoch,loss\n";
    for (std::size_t l = 0; l < result.traces.size(); ++l)
        for (std::size_t e = 0; e < result.traces[l].loss.size(); ++e)
            t << l + 1 << ',' << e + 1 << ',' << format_double(result.traces[l].loss[e]) << '\n';
    write_text_file(trace_path(trace, out), t.str());

    std::cout << "pretrained " << p.all_x.rows() << " rows through";
    for (const auto& tr : result.traces)
        std::cout << " [" << format_double(tr.loss.front()) << " -> " << format_double(tr.loss.back()) << "]";
    std::cout << "\nwrote " << out << '\n';
    return kOk;
}

int run_train(const DataOptions& data, const std::string& model_path, bool no_pretrain,
              const std::vector<Eigen::Index>& layers, const FinetuneOptions& ft_opts, std::uint64_t seed,
              const std::string& out, const std::string& trace) {
    if (model_path.empty() && !no_pretrain)
        throw ParameterError("train needs --model <pretrained stack> or --no-pretrain");
    if (!model_path.empty() && no_pretrain)
        throw ParameterError("--model and --no-pretrain are mutually exclusive");
    const TrainConfig cfg = build_finetune(ft_opts, seed);
    const Dataset ds = load_dataset(data);
    if (ds.labeled_count() == 0)
        throw ParameterError("'" + data.data + "' has no labeled rows");

    Rng init_rng = Rng::derive(seed, StreamPurpose::Init);
    FeedForwardNet net;
    if (no_pretrain) {
        std::vector<Eigen::Index> dims = layers;
        dims.push_back(1);
        if (dims.front() != ds.dim)
            throw ShapeError("layers expect input dim " + std::to_string(dims.front()) + " but data has dim " +
                             std::to_string(ds.dim));
        net = random_net<double>(dims, init_rng);
    } else {
        const SdaeStack stack = load_stack(model_path);
        if (stack.layers.front().input_dim() != ds.dim)
            throw ShapeError("model input dim " + std::to_string(stack.layers.front().input_dim()) +
                             " does not match data dim " + std::to_string(ds.dim));
        net = unroll(stack, init_rng);
    }

    const Prepared p = prepare(ds, data.no_normalize);
    const TrainReport report = finetune(net, p.labeled_x, ds.labeled_y, cfg);
    save_net(out, net);

    std::ostringstream t;
    t << "epoch,loss,accuracy\n";
    for (std::size_t e = 0; e < report.loss.size(); ++e)
        t << e + 1 << ',' << format_double(report.loss[e]) << ',' << format_double(report.accuracy[e]) << '\n';
    write_text_file(trace_path(trace, out), t.str());

    std::cout << net.architecture() << (no_pretrain ? " (random init)" : " (pretrained)") << " trained "
              << cfg.epochs << " epochs: loss " << format_double(report.loss.back()) << ", training accuracy "
              << format_double(report.accuracy.back()) << "\nwrote " << out << '\n';
    return kOk;
}

struct EvaluateOptions {
    std::string methods = "knn,svm,mlp,proposed";
    std::size_t k_folds = kDefaultFolds;
    std::size_t knn_k = kDefaultKnnK;
    bool pooled = false;
    std::string negative_pool;
    double neg_ratio = kDefaultNegativeRatio;
    std::string model_dir;
};

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream in(list);
    std::string key;
    while (std::getline(in, key, ','))
        if (!key.empty())
            out.push_back(parse_method(key));
    if (out.empty())
        throw ParameterError("--methods selects nothing");
    return out;
}

int run_evaluate(const DataOptions& data, const StackOptions& stack_opts, const FinetuneOptions& ft_opts,
                 const EvaluateOptions& eval_opts, std::uint64_t seed, const std::string& out) {
    ComparisonConfig config;
    config.methods = parse_methods(eval_opts.methods);
    config.k = eval_opts.k_folds;
    config.seed = seed;
    config.knn_k = eval_opts.knn_k;
    config.svm = default_svm_config();
    config.pretrain_specs = build_specs(stack_opts);
    config.finetune = build_finetune(ft_opts, seed);
    config.pooled = eval_opts.pooled;

    Dataset ds = load_dataset(data);
    if (!eval_opts.negative_pool.empty()) {
        CsvOptions csv;
        csv.skip_header = data.skip_header;
        csv.has_label_column = false;
        csv.dim = ds.dim;
        const Dataset pool = load_csv(eval_opts.negative_pool, csv);
        ds = with_sampled_negatives(ds, pool.unlabeled_x, eval_opts.neg_ratio, seed);
        config.negatives_note = "sampled from pool at " + format_double(eval_opts.neg_ratio) + ":1";
    }
    if (data.no_normalize)
        std::clog << "note: evaluate always fits min-max scaling per training fold\n";

    if (!eval_opts.model_dir.empty()) {
        std::filesystem::create_directories(eval_opts.model_dir);
        const std::filesystem::path dir = eval_opts.model_dir;
        config.on_net = [dir](Method m, std::size_t fold, const FeedForwardNet& net) {
            save_net(dir / (std::string(method_key(m)) + "_fold" + std::to_string(fold + 1) + ".json"), net);
        };
    }

    const ComparisonReport report = run_comparison(ds, config);
    const std::string text = render_report_text(report);
    std::cout << text;
    if (!out.empty()) {
        write_text_file(out + ".txt", text);
        write_text_file(out + ".csv", render_report_csv(report));
        std::cout << "wrote " << out << ".txt and " << out << ".csv\n";
    }
    return kOk;
}

int run_visualize(const std::string& model_path, std::size_t layer, const std::string& out) {
    const auto weights = load_layer_weights(model_path);
    if (layer < 1 || layer > weights.size())
        throw ParameterError("--layer " + std::to_string(layer) + " out of range 1.." + std::to_string(weights.size()));
    const Matrix& w = weights[layer - 1];
    write_filter_pgm(out, w);
    std::cout << "wrote " << w.cols() << "x" << w.rows() << " (inputs x hidden units) filter image to " << out << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stacked denoising autoencoder pretraining and semi-supervised classification"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string out;
    std::string trace;

    app.add_subcommand("show-config", "print every default hyperparameter");

    auto* synth = app.add_subcommand("synth", "write a synthetic semi-supervised CSV");
    SynthParams synth_params;
    synth->add_option("--n-labeled", synth_params.n_labeled, "labeled rows");
    synth->add_option("--n-unlabeled", synth_params.n_unlabeled, "unlabeled rows");
    synth->add_option("--dim", synth_params.dim, "feature dimension");
    synth->add_option("--latent-dim", synth_params.latent_dim, "latent dimension");
    synth->add_option("--noise", synth_params.noise, "pre-sigmoid gaussian noise std");
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--out", out, "output CSV")->required();

    DataOptions data;
    StackOptions stack_opts;
    FinetuneOptions ft_opts;

    auto* pre = app.add_subcommand("pretrain", "greedy layer-wise DAE pretraining on all rows");
    add_data_flags(pre, data);
    add_stack_flags(pre, stack_opts, "");
    pre->add_option("--seed", seed, "random seed");
    pre->add_option("--out", out, "output stack model (JSON)")->required();
    pre->add_option("--trace", trace, "per-layer loss trace CSV (default <out>.trace.csv)");

    auto* train = app.add_subcommand("train", "fine-tune a classifier on the labeled rows");
    std::string model_path;
    bool no_pretrain = false;
    std::vector<Eigen::Index> train_layers{18, 14, 8};
    add_data_flags(train, data);
    add_finetune_flags(train, ft_opts);
    train->add_option("--model", model_path, "pretrained stack model to unroll");
    train->add_flag("--no-pretrain", no_pretrain, "random initialization (the MLP baseline)");
    train->add_option("--layers", train_layers, "layer widths for --no-pretrain, input first")->delimiter(',');
    train->add_option("--seed", seed, "random seed");
    train->add_option("--out", out, "output network model (JSON)")->required();
    train->add_option("--trace", trace, "per-epoch loss/accuracy CSV (default <out>.trace.csv)");

    auto* evaluate = app.add_subcommand("evaluate", "k-fold comparison of kNN, SVM, MLP and the pretrained net");
    EvaluateOptions eval_opts;
    add_data_flags(evaluate, data);
    add_stack_flags(evaluate, stack_opts, "pretrain-");
    add_finetune_flags(evaluate, ft_opts);
    evaluate->add_option("--methods", eval_opts.methods, "comma list of knn,svm,mlp,proposed");
    evaluate->add_option("--k-folds", eval_opts.k_folds, "number of folds");
    evaluate->add_option("--knn-k", eval_opts.knn_k, "neighbours for kNN");
    evaluate->add_flag("--pooled", eval_opts.pooled, "score pooled predictions instead of averaging folds");
    evaluate->add_option("--negative-pool", eval_opts.negative_pool, "CSV of candidate negatives (features only)");
    evaluate->add_option("--neg-ratio", eval_opts.neg_ratio, "negatives sampled per positive from the pool");
    evaluate->add_option("--model-dir", eval_opts.model_dir, "save every fold's trained network here");
    evaluate->add_option("--seed", seed, "random seed");
    evaluate->add_option("--out", out, "report prefix: writes <out>.txt and <out>.csv");

    auto* viz = app.add_subcommand("visualize", "write a layer's weights as a plain PGM filter image");
    std::size_t layer = 1;
    viz->add_option("--model", model_path, "stack or network model")->required();
    viz->add_option("--layer", layer, "layer index, 1-based");
    viz->add_option("--out", out, "output .pgm")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (app.got_subcommand("show-config")) {
            std::cout << render_default_config();
            return kOk;
        }
        if (app.got_subcommand(synth)) {
            synth_params.seed = seed;
            return run_synth(synth_params, out);
        }
        if (app.got_subcommand(pre))
            return run_pretrain(data, stack_opts, seed, out, trace);
        if (app.got_subcommand(train))
            return run_train(data, model_path, no_pretrain, train_layers, ft_opts, seed, out, trace);
        if (app.got_subcommand(evaluate))
            return run_evaluate(data, stack_opts, ft_opts, eval_opts, seed, out);
        if (app.got_subcommand(viz))
            return run_visualize(model_path, layer, out);
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const DataError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kIoError;
    } catch (const ModelFormatError& e) {
        std::cerr << "model file error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}
