#include "sdae/data.hpp"

#include "sdae/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

namespace sdae {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

double parse_feature(std::string_view field, const std::filesystem::path& path, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = field.data() + field.size();
    if (!field.empty() && *begin == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw DataError(where(path, line) + "non-numeric feature '" + std::string(field) + "'");
    return value;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows, Eigen::Index dim) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return m;
}

}  // namespace

std::size_t Dataset::positive_count() const {
    return static_cast<std::size_t>(std::count(labeled_y.begin(), labeled_y.end(), 1));
}

void Dataset::validate() const {
    if (labeled_x.rows() > 0 && labeled_x.cols() != dim)
        throw ShapeError("dataset: labeled rows have " + std::to_string(labeled_x.cols()) + " features, expected " +
                         std::to_string(dim));
    if (unlabeled_x.rows() > 0 && unlabeled_x.cols() != dim)
        throw ShapeError("dataset: unlabeled rows have " + std::to_string(unlabeled_x.cols()) +
                         " features, expected " + std::to_string(dim));
    if (static_cast<std::size_t>(labeled_x.rows()) != labeled_y.size())
        throw ShapeError("dataset: " + std::to_string(labeled_x.rows()) + " labeled rows but " +
                         std::to_string(labeled_y.size()) + " labels");
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");

    std::optional<Eigen::Index> dim = options.dim;
    std::vector<std::vector<double>> labeled_rows;
    std::vector<std::vector<double>> unlabeled_rows;
    Dataset out;
    std::string provenance;

    std::string raw;
    std::size_t line_no = 0;
    bool header_pending = options.skip_header;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            if (!provenance.empty())
                provenance += '\n';
            provenance += std::string(trim(line.substr(1)));
            continue;
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }

        const auto fields = split_commas(line);
        const std::size_t label_fields = options.has_label_column ? 1 : 0;
        if (fields.size() <= label_fields)
            throw DataError(where(path, line_no) + "row has no features");
        const auto n_features = static_cast<Eigen::Index>(fields.size() - label_fields);
        if (!dim)
            dim = n_features;
        if (n_features != *dim)
            throw DataError(where(path, line_no) + "expected " + std::to_string(*dim) + " features, found " +
                            std::to_string(n_features));

        std::vector<double> row(static_cast<std::size_t>(n_features));
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = parse_feature(fields[j], path, line_no);

        if (!options.has_label_column) {
            unlabeled_rows.push_back(std::move(row));
            continue;
        }
        const std::string_view label = fields.back();
        if (label == "1" || label == "0") {
            labeled_rows.push_back(std::move(row));
            out.labeled_y.push_back(label == "1" ? 1 : 0);
        } else if (label == "?") {
            unlabeled_rows.push_back(std::move(row));
        } else {
            throw DataError(where(path, line_no) + "unknown label token '" + std::string(label) + "'");
        }
    }
    if (in.bad())
        throw IoError("error while reading '" + path.string() + "'");

    out.dim = dim.value_or(0);
    out.labeled_x = rows_to_matrix(labeled_rows, out.dim);
    out.unlabeled_x = rows_to_matrix(unlabeled_rows, out.dim);
    out.provenance = provenance.empty() ? path.filename().string() : provenance;
    return out;
}

Dataset load_csv_pair(const std::filesystem::path& labeled, const std::filesystem::path& unlabeled,
                      const CsvOptions& options) {
    Dataset first = load_csv(labeled, options);
    if (first.unlabeled_count() > 0)
        throw DataError(labeled.string() + ": labeled file contains '?' rows");
    CsvOptions second_options = options;
    second_options.has_label_column = false;
    if (first.dim > 0)
        second_options.dim = first.dim;
    const Dataset second = load_csv(unlabeled, second_options);
    if (first.dim == 0)
        first.dim = second.dim;
    first.unlabeled_x = second.unlabeled_x;
    first.provenance += "\n" + second.provenance;
    first.validate();
    return first;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        throw DataError("cannot format value");
    return std::string(buf, ptr);
}

std::string to_csv(const Dataset& dataset) {
    dataset.validate();
    std::ostringstream out;
    if (!dataset.provenance.empty()) {
        std::istringstream lines(dataset.provenance);
        std::string line;
        while (std::getline(lines, line))
            out << "# " << line << '\n';
    }
    const auto write_row = [&](const Matrix& m, Eigen::Index i, std::string_view label) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << format_double(m(i, j)) << ',';
        out << label << '\n';
    };
    for (Eigen::Index i = 0; i < dataset.labeled_x.rows(); ++i)
        write_row(dataset.labeled_x, i, dataset.labeled_y[static_cast<std::size_t>(i)] == 1 ? "1" : "0");
    for (Eigen::Index i = 0; i < dataset.unlabeled_x.rows(); ++i)
        write_row(dataset.unlabeled_x, i, "?");
    return out.str();
}

void save_csv(const std::filesystem::path& path, const Dataset& dataset) {
    const std::string text = to_csv(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw IoError("error while writing '" + path.string() + "'");
}

NormStats fit_normalize(const Matrix& train_x) {
    if (train_x.rows() == 0)
        throw ParameterError("fit_normalize: no rows to fit");
    return {train_x.colwise().minCoeff().transpose(), train_x.colwise().maxCoeff().transpose()};
}

Matrix apply_normalize(const NormStats& stats, const Matrix& x) {
    if (x.cols() != stats.min.size() || stats.max.size() != stats.min.size())
        throw ShapeError("apply_normalize: stats for " + std::to_string(stats.min.size()) + " features, data " +
                         shape_string(x));
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double lo = stats.min(j);
        const double range = stats.max(j) - lo;
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            out(i, j) = range > 0.0 ? std::clamp((x(i, j) - lo) / range, 0.0, 1.0) : 0.5;
    }
    return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    if (top.rows() == 0)
        return bottom;
    if (bottom.rows() == 0)
        return top;
    if (top.cols() != bottom.cols())
        throw ShapeError("vstack: " + shape_string(top) + " vs " + shape_string(bottom));
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out.topRows(top.rows()) = top;
    out.bottomRows(bottom.rows()) = bottom;
    return out;
}

void SynthParams::validate() const {
    if (dim <= 0 || latent_dim <= 0)
        throw ParameterError("synth: dimensions must be positive");
    if (latent_dim >= dim)
        throw ParameterError("synth: latent dimension must be below the feature dimension");
    if (!(noise >= 0.0 && std::isfinite(noise)))
        throw ParameterError("synth: noise must be non-negative");
}

namespace {

struct LatentModel {
    Matrix mixing;  // (dim x latent)
    Vector offset;  // length dim
};

int latent_label(const Eigen::Ref<const Eigen::RowVectorXd>& u) {
    if (u.size() == 1)
        return std::abs(u(0) - 0.5) < 0.25 ? 1 : 0;
    const double a = u(0) - 0.5;
    const double b = u(1) - 0.5;
    return a * a + b * b < 0.5 / std::numbers::pi ? 1 : 0;
}

Eigen::RowVectorXd observe(const LatentModel& model, const Eigen::RowVectorXd& u, double noise, Rng& rng) {
    Eigen::RowVectorXd x(model.mixing.rows());
    for (Eigen::Index i = 0; i < model.mixing.rows(); ++i) {
        double pre = model.offset(i);
        for (Eigen::Index k = 0; k < model.mixing.cols(); ++k)
            pre += model.mixing(i, k) * (u(k) - 0.5);
        if (noise > 0.0)
            pre += noise * rng.gaussian();
        x(i) = sigmoid(pre);
    }
    return x;
}

}  // namespace

Dataset synth_generate(const SynthParams& params) {
    params.validate();
    Rng model_rng = Rng::derive(params.seed, StreamPurpose::Data, 0);
    LatentModel model;
    model.mixing = rng_gaussian<double>(model_rng, params.dim, params.latent_dim, 2.0);
    model.offset = rng_gaussian<double>(model_rng, params.dim, 1, 0.5).col(0);

    Dataset out;
    out.dim = params.dim;

    Rng labeled_rng = Rng::derive(params.seed, StreamPurpose::Data, 1);
    const std::size_t want_pos = (params.n_labeled + 1) / 2;
    const std::size_t want_neg = params.n_labeled / 2;
    std::size_t have_pos = 0;
    std::size_t have_neg = 0;
    out.labeled_x.resize(static_cast<Eigen::Index>(params.n_labeled), params.dim);
    Eigen::Index row = 0;
    while (have_pos + have_neg < params.n_labeled) {
        Eigen::RowVectorXd u(params.latent_dim);
        for (Eigen::Index k = 0; k < params.latent_dim; ++k)
            u(k) = labeled_rng.uniform();
        const int label = latent_label(u);
        const Eigen::RowVectorXd x = observe(model, u, params.noise, labeled_rng);
        if (label == 1 ? have_pos >= want_pos : have_neg >= want_neg)
            continue;
        (label == 1 ? have_pos : have_neg) += 1;
        out.labeled_x.row(row++) = x;
        out.labeled_y.push_back(label);
    }

    Rng unlabeled_rng = Rng::derive(params.seed, StreamPurpose::Data, 2);
    out.unlabeled_x.resize(static_cast<Eigen::Index>(params.n_unlabeled), params.dim);
    for (Eigen::Index i = 0; i < out.unlabeled_x.rows(); ++i) {
        Eigen::RowVectorXd u(params.latent_dim);
        for (Eigen::Index k = 0; k < params.latent_dim; ++k)
            u(k) = unlabeled_rng.uniform();
        out.unlabeled_x.row(i) = observe(model, u, params.noise, unlabeled_rng);
    }

    std::ostringstream note;
    note << "synth n_labeled=" << params.n_labeled << " n_unlabeled=" << params.n_unlabeled << " dim=" << params.dim
         << " latent_dim=" << params.latent_dim << " noise=" << format_double(params.noise)
         << " seed=" << params.seed;
    out.provenance = note.str();
    return out;
}

Dataset with_sampled_negatives(const Dataset& dataset, const Matrix& pool, double ratio, std::uint64_t seed) {
    dataset.validate();
    if (!(ratio > 0.0 && std::isfinite(ratio)))
        throw ParameterError("negative ratio must be positive");
    if (pool.rows() > 0 && pool.cols() != dataset.dim)
        throw ShapeError("negative pool has " + std::to_string(pool.cols()) + " features, dataset has " +
                         std::to_string(dataset.dim));
    const std::size_t positives = dataset.positive_count();
    const auto wanted = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(positives)));
    if (wanted > static_cast<std::size_t>(pool.rows()))
        throw ParameterError("negative pool has " + std::to_string(pool.rows()) + " rows, " + std::to_string(wanted) +
                             " requested");

    Rng rng = Rng::derive(seed, StreamPurpose::Data, 3);
    std::vector<std::size_t> order = rng.permutation(static_cast<std::size_t>(pool.rows()));
    order.resize(wanted);
    std::sort(order.begin(), order.end());

    Dataset out = dataset;
    out.labeled_x.resize(static_cast<Eigen::Index>(positives + wanted), dataset.dim);
    out.labeled_y.clear();
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < dataset.labeled_y.size(); ++i) {
        if (dataset.labeled_y[i] != 1)
            continue;
        out.labeled_x.row(row++) = dataset.labeled_x.row(static_cast<Eigen::Index>(i));
        out.labeled_y.push_back(1);
    }
    for (const std::size_t idx : order) {
        out.labeled_x.row(row++) = pool.row(static_cast<Eigen::Index>(idx));
        out.labeled_y.push_back(0);
    }
    std::ostringstream note;
    note << "negatives sampled from pool at ratio " << format_double(ratio) << ":1 (" << wanted << " rows, seed "
         << seed << ")";
    out.provenance += (out.provenance.empty() ? "" : "\n") + note.str();
    return out;
}

}  // namespace sdae
