#include "sdae/model_io.hpp"

#include "sdae/data.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sdae {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "sdae-model";

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Matrix& m) { return json(std::vector<double>(m.data(), m.data() + m.size())); }

std::string arch_of(const std::vector<Eigen::Index>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i)
        out += (i ? "-" : "") + std::to_string(dims[i]);
    return out;
}

std::string layer_tag(std::size_t i) { return "layer " + std::to_string(i + 1) + ": "; }

Eigen::Index read_dim(const json& layer, const char* key, std::size_t i) {
    if (!layer.contains(key) || !layer.at(key).is_number_integer() || layer.at(key).get<long long>() <= 0)
        throw ModelFormatError(layer_tag(i) + "missing or invalid '" + key + "'");
    return static_cast<Eigen::Index>(layer.at(key).get<long long>());
}

std::vector<double> read_array(const json& layer, const char* key, std::size_t expected, std::size_t i) {
    if (!layer.contains(key) || !layer.at(key).is_array())
        throw ModelFormatError(layer_tag(i) + "missing array '" + key + "'");
    std::vector<double> values;
    for (const auto& v : layer.at(key)) {
        if (!v.is_number())
            throw ModelFormatError(layer_tag(i) + "'" + key + "' holds a non-number");
        values.push_back(v.get<double>());
    }
    if (values.size() != expected)
        throw ModelFormatError(layer_tag(i) + "'" + key + "' has " + std::to_string(values.size()) +
                               " values, expected " + std::to_string(expected));
    return values;
}

Matrix read_matrix(const json& layer, const char* key, Eigen::Index rows, Eigen::Index cols, std::size_t i) {
    const auto values = read_array(layer, key, static_cast<std::size_t>(rows * cols), i);
    return Eigen::Map<const Matrix>(values.data(), rows, cols);
}

Vector read_vector(const json& layer, const char* key, Eigen::Index size, std::size_t i) {
    const auto values = read_array(layer, key, static_cast<std::size_t>(size), i);
    return Eigen::Map<const Vector>(values.data(), size);
}

json parse_document(const std::string& text, ModelKind expected) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kFormatTag)
        throw ModelFormatError("not an sdae model document");
    if (doc.value("version", 0) != kModelFormatVersion)
        throw ModelFormatError("unsupported model format version");
    const std::string kind = doc.value("kind", "");
    if (kind != "stack" && kind != "network")
        throw ModelFormatError("unknown model kind '" + kind + "'");
    if ((kind == "stack") != (expected == ModelKind::Stack))
        throw ModelFormatError("expected a " + std::string(expected == ModelKind::Stack ? "stack" : "network") +
                               " model, found '" + kind + "'");
    if (!doc.contains("layers") || !doc.at("layers").is_array() || doc.at("layers").empty())
        throw ModelFormatError("model has no layers");
    return doc;
}

/// Checks that layer dims chain and agree with the architecture string.
void check_dims(const json& doc, const std::vector<Eigen::Index>& dims) {
    const std::string declared = doc.value("architecture", "");
    if (declared != arch_of(dims))
        throw ModelFormatError("architecture '" + declared + "' does not match layer dims " + arch_of(dims));
}

const char* corruption_name(CorruptionKind kind) { return to_string(kind); }

CorruptionKind corruption_from(const std::string& name) {
    if (name == "none")
        return CorruptionKind::None;
    if (name == "masking")
        return CorruptionKind::Masking;
    if (name == "gaussian")
        return CorruptionKind::Gaussian;
    throw ModelFormatError("unknown corruption kind '" + name + "'");
}

}  // namespace

std::string stack_to_json(const SdaeStack& stack) {
    json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kModelFormatVersion;
    doc["kind"] = "stack";
    std::vector<Eigen::Index> dims;
    json layers = json::array();
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const DaeLayer& layer = stack.layers[i];
        if (i == 0)
            dims.push_back(layer.input_dim());
        dims.push_back(layer.hidden_dim());
        json entry;
        entry["input_dim"] = layer.input_dim();
        entry["output_dim"] = layer.hidden_dim();
        entry["weights"] = matrix_json(layer.weights);
        entry["bias"] = vector_json(layer.encoder_bias);
        entry["decoder_bias"] = vector_json(layer.decoder_bias);
        if (i < stack.specs.size()) {
            const LayerSpec& spec = stack.specs[i];
            entry["training"] = {
                {"corruption", corruption_name(spec.corruption.kind)},
                {"noise_fraction", spec.corruption.nu},
                {"sigma", spec.corruption.sigma},
                {"loss", to_string(spec.loss)},
                {"learning_rate", spec.train.learning_rate},
                {"momentum", spec.train.momentum},
                {"epochs", spec.train.epochs},
                {"batch_size", spec.train.batch_size},
            };
        }
        layers.push_back(std::move(entry));
    }
    doc["architecture"] = arch_of(dims);
    doc["layers"] = std::move(layers);
    return doc.dump(1) + "\n";
}

std::string net_to_json(const FeedForwardNet& net) {
    net.validate();
    json doc;
    doc["format"] = kFormatTag;
    doc["version"] = kModelFormatVersion;
    doc["kind"] = "network";
    doc["architecture"] = net.architecture();
    doc["activation"] = "sigmoid";
    json layers = json::array();
    for (const auto& layer : net.layers) {
        json entry;
        entry["input_dim"] = layer.input_dim();
        entry["output_dim"] = layer.output_dim();
        entry["weights"] = matrix_json(layer.weights);
        entry["bias"] = vector_json(layer.bias);
        layers.push_back(std::move(entry));
    }
    doc["layers"] = std::move(layers);
    return doc.dump(1) + "\n";
}

SdaeStack stack_from_json(const std::string& text) {
    const json doc = parse_document(text, ModelKind::Stack);
    SdaeStack stack;
    std::vector<Eigen::Index> dims;
    const json& layers = doc.at("layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const json& entry = layers[i];
        const Eigen::Index in = read_dim(entry, "input_dim", i);
        const Eigen::Index out = read_dim(entry, "output_dim", i);
        if (i > 0 && in != dims.back())
            throw ModelFormatError(layer_tag(i) + "input_dim " + std::to_string(in) +
                                   " does not match previous output_dim " + std::to_string(dims.back()));
        if (i == 0)
            dims.push_back(in);
        dims.push_back(out);

        DaeLayer layer;
        layer.weights = read_matrix(entry, "weights", out, in, i);
        layer.encoder_bias = read_vector(entry, "bias", out, i);
        layer.decoder_bias = read_vector(entry, "decoder_bias", in, i);

        LayerSpec spec;
        spec.input_dim = in;
        spec.hidden_dim = out;
        if (entry.contains("training")) {
            const json& t = entry.at("training");
            try {
                spec.corruption.kind = corruption_from(t.value("corruption", "masking"));
                spec.corruption.nu = t.value("noise_fraction", 0.0);
                spec.corruption.sigma = t.value("sigma", 0.0);
                spec.loss = t.value("loss", "squared_error") == "cross_entropy" ? LossKind::CrossEntropy
                                                                                 : LossKind::SquaredError;
                spec.train.learning_rate = t.value("learning_rate", 0.0);
                spec.train.momentum = t.value("momentum", 0.0);
                spec.train.epochs = t.value("epochs", std::size_t{1});
                spec.train.batch_size = t.value("batch_size", std::size_t{1});
            } catch (const json::exception& e) {
                throw ModelFormatError(layer_tag(i) + "invalid training block: " + e.what());
            }
        }
        stack.layers.push_back(std::move(layer));
        stack.specs.push_back(spec);
    }
    check_dims(doc, dims);
    return stack;
}

FeedForwardNet net_from_json(const std::string& text) {
    const json doc = parse_document(text, ModelKind::Network);
    FeedForwardNet net;
    std::vector<Eigen::Index> dims;
    const json& layers = doc.at("layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const json& entry = layers[i];
        const Eigen::Index in = read_dim(entry, "input_dim", i);
        const Eigen::Index out = read_dim(entry, "output_dim", i);
        if (i > 0 && in != dims.back())
            throw ModelFormatError(layer_tag(i) + "input_dim " + std::to_string(in) +
                                   " does not match previous output_dim " + std::to_string(dims.back()));
        if (i == 0)
            dims.push_back(in);
        dims.push_back(out);
        net.layers.push_back({read_matrix(entry, "weights", out, in, i), read_vector(entry, "bias", out, i)});
    }
    check_dims(doc, dims);
    if (dims.back() != 1)
        throw ModelFormatError("network output must be a single unit, found " + std::to_string(dims.back()));
    return net;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("error while reading '" + path.string() + "'");
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw IoError("error while writing '" + path.string() + "'");
}

void save_stack(const std::filesystem::path& path, const SdaeStack& stack) {
    write_text_file(path, stack_to_json(stack));
}

void save_net(const std::filesystem::path& path, const FeedForwardNet& net) { write_text_file(path, net_to_json(net)); }

SdaeStack load_stack(const std::filesystem::path& path) { return stack_from_json(read_text_file(path)); }

FeedForwardNet load_net(const std::filesystem::path& path) { return net_from_json(read_text_file(path)); }

ModelKind model_kind(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.is_object() && doc.value("kind", "") == "network")
            return ModelKind::Network;
        if (doc.is_object() && doc.value("kind", "") == "stack")
            return ModelKind::Stack;
    } catch (const json::parse_error& e) {
        throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    throw ModelFormatError("not an sdae model document");
}

std::vector<Matrix> load_layer_weights(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<Matrix> out;
    if (model_kind(text) == ModelKind::Stack) {
        for (auto& layer : stack_from_json(text).layers)
            out.push_back(std::move(layer.weights));
    } else {
        for (auto& layer : net_from_json(text).layers)
            out.push_back(std::move(layer.weights));
    }
    return out;
}

}  // namespace sdae
