#pragma once

#include "sdae/network.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdae {

/// A model document was syntactically or dimensionally invalid.
class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { Stack, Network };

/// Model files are JSON documents:
///
///   {"format": "sdae-model", "version": 1, "kind": "stack" | "network",
///    "architecture": "18-14-8", "layers": [{"input_dim": 18, "output_dim": 14,
///    "weights": [...], "bias": [...], "decoder_bias": [...], ...}]}
///
/// `weights` is row-major (output_dim x input_dim). Stack layers also carry
/// their decoder bias and training settings. Doubles are written with
/// round-trip precision.
std::string stack_to_json(const SdaeStack& stack);
std::string net_to_json(const FeedForwardNet& net);

SdaeStack stack_from_json(const std::string& text);
FeedForwardNet net_from_json(const std::string& text);

void save_stack(const std::filesystem::path& path, const SdaeStack& stack);
void save_net(const std::filesystem::path& path, const FeedForwardNet& net);
SdaeStack load_stack(const std::filesystem::path& path);
FeedForwardNet load_net(const std::filesystem::path& path);

ModelKind model_kind(const std::string& text);

/// Weight matrices of every layer of either kind of model file.
std::vector<Matrix> load_layer_weights(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sdae
