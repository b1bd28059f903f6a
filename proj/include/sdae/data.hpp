#pragma once

#include "sdae/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace sdae {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File was readable but its contents are malformed.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Labeled rows (with 0/1 labels) and unlabeled rows over one feature dimension.
struct Dataset {
    Eigen::Index dim = 0;
    Matrix labeled_x;
    Labels labeled_y;
    Matrix unlabeled_x;
    std::string provenance;

    Eigen::Index labeled_count() const { return labeled_x.rows(); }
    Eigen::Index unlabeled_count() const { return unlabeled_x.rows(); }
    std::size_t positive_count() const;

    void validate() const;
};

struct CsvOptions {
    bool has_label_column = true;
    bool skip_header = false;
    /// Expected feature count; inferred from the first data row when unset.
    std::optional<Eigen::Index> dim;
};

/// Comma-separated rows of features, optionally followed by a label of
/// "1", "0" or "?" (unlabeled). Lines starting with '#' are comments and are
/// appended to the provenance note. Blank lines are skipped. Without a label
/// column every row is unlabeled.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Labeled rows from one file and unlabeled rows from a feature-only file.
Dataset load_csv_pair(const std::filesystem::path& labeled, const std::filesystem::path& unlabeled,
                      const CsvOptions& options = {});

/// Writes labeled rows then unlabeled rows ("?" label), shortest round-trip
/// decimal for every value. Each line of the provenance becomes a '#' comment.
void save_csv(const std::filesystem::path& path, const Dataset& dataset);
std::string to_csv(const Dataset& dataset);

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

struct NormStats {
    Vector min;
    Vector max;
};

/// Per-feature min and max of `train_x`.
NormStats fit_normalize(const Matrix& train_x);

/// (x - min) / (max - min), clamped to [0, 1]. Constant features map to 0.5.
Matrix apply_normalize(const NormStats& stats, const Matrix& x);

/// Row-wise concatenation.
Matrix vstack(const Matrix& top, const Matrix& bottom);

/// Parameters of the synthetic latent-factor generator.
struct SynthParams {
    std::size_t n_labeled = 100;
    std::size_t n_unlabeled = 5000;
    Eigen::Index dim = 18;
    Eigen::Index latent_dim = 4;
    double noise = 0.3;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Draws a semi-supervised dataset from a latent factor model.
///
/// Latent u is uniform on [0,1)^latent_dim. Observed x = sigmoid(A (u - 1/2) + c + e)
/// with a fixed seeded mixing matrix A, offset c and Gaussian e of std `noise`.
/// The label is 1 iff u lies inside a circle of area 1/2 centred in the first two
/// latent coordinates (or the interval |u_0 - 1/2| < 1/4 when latent_dim is 1).
/// Labeled rows are accepted by rejection so that exactly ceil(n/2) are
/// positive; unlabeled rows are drawn without rejection.
Dataset synth_generate(const SynthParams& params);

/// Adds `ratio` x (positive count) rows sampled without replacement from
/// `pool` as negatives and drops any negatives the dataset already had.
Dataset with_sampled_negatives(const Dataset& dataset, const Matrix& pool, double ratio, std::uint64_t seed);

}  // namespace sdae
