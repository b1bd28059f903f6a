#include "sdae/data.hpp"
#include "sdae/defaults.hpp"
#include "sdae/model_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace sdae;

namespace {

SdaeStack trained_stack() {
    SynthParams params;
    params.n_labeled = 2;
    params.n_unlabeled = 40;
    auto specs = default_layer_specs();
    for (auto& s : specs)
        s.train.epochs = 2;
    Rng rng(1);
    return pretrain(specs, synth_generate(params).unlabeled_x, rng).stack;
}

}  // namespace

TEST(ModelIo, StackRoundTripsBitExact) {
    const SdaeStack stack = trained_stack();
    const SdaeStack back = stack_from_json(stack_to_json(stack));
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back.layers[i].weights, stack.layers[i].weights);
        EXPECT_EQ(back.layers[i].encoder_bias, stack.layers[i].encoder_bias);
        EXPECT_EQ(back.layers[i].decoder_bias, stack.layers[i].decoder_bias);
        EXPECT_EQ(back.specs[i].corruption.nu, stack.specs[i].corruption.nu);
        EXPECT_EQ(back.specs[i].train.learning_rate, stack.specs[i].train.learning_rate);
    }
    EXPECT_EQ(stack_to_json(back), stack_to_json(stack));
}

TEST(ModelIo, NetRoundTripsBitExact) {
    Rng rng(2);
    const FeedForwardNet net = unroll(trained_stack(), rng);
    const std::string text = net_to_json(net);
    const auto doc = nlohmann::json::parse(text);
    EXPECT_EQ(doc["architecture"], "18-14-8-1");
    EXPECT_EQ(doc["version"], kModelFormatVersion);
    const FeedForwardNet back = net_from_json(text);
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        EXPECT_EQ(back.layers[i].weights, net.layers[i].weights);
        EXPECT_EQ(back.layers[i].bias, net.layers[i].bias);
    }
}

TEST(ModelIo, RejectsInconsistentDimensions) {
    Rng rng(3);
    const FeedForwardNet net = random_net<double>({4, 3, 1}, rng);
    auto doc = nlohmann::json::parse(net_to_json(net));

    auto short_weights = doc;
    short_weights["layers"][0]["weights"].erase(0);
    EXPECT_THROW(net_from_json(short_weights.dump()), ModelFormatError);

    auto broken_chain = doc;
    broken_chain["layers"][1]["input_dim"] = 5;
    EXPECT_THROW(net_from_json(broken_chain.dump()), ModelFormatError);

    auto wrong_arch = doc;
    wrong_arch["architecture"] = "4-2-1";
    EXPECT_THROW(net_from_json(wrong_arch.dump()), ModelFormatError);

    auto bad_version = doc;
    bad_version["version"] = 99;
    EXPECT_THROW(net_from_json(bad_version.dump()), ModelFormatError);

    EXPECT_THROW(net_from_json("{not json"), ModelFormatError);
    EXPECT_THROW(stack_from_json(net_to_json(net)), ModelFormatError);
}

TEST(ModelIo, FilesAndLayerWeights) {
    TempDir dir;
    const SdaeStack stack = trained_stack();
    save_stack(dir / "s.json", stack);
    const auto weights = load_layer_weights(dir / "s.json");
    ASSERT_EQ(weights.size(), 2u);
    EXPECT_EQ(weights[0], stack.layers[0].weights);
    EXPECT_EQ(load_stack(dir / "s.json").layers[1].weights, stack.layers[1].weights);
    EXPECT_THROW(load_stack(dir / "none.json"), IoError);
}
