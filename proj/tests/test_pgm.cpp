#include "sdae/pgm.hpp"
#include "sdae/data.hpp"
#include "sdae/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace sdae;

TEST(FilterImage, ColumnsAreHiddenUnits) {
    Matrix w(2, 3);  // 2 hidden units, 3 inputs
    w << 0.0, 1.0, 2.0,  //
        4.0, 3.0, 8.0;
    const GrayImage img = filter_image(w);
    EXPECT_EQ(img.width, 2u);
    EXPECT_EQ(img.height, 3u);
    EXPECT_EQ(img.at(0, 0), 0);
    EXPECT_EQ(img.at(2, 1), 255);
    EXPECT_EQ(img.at(0, 1), 128);  // 4/8 * 255 = 127.5 rounds half away from zero
    EXPECT_EQ(img.at(1, 0), 32);   // 1/8 * 255 = 31.875
    EXPECT_EQ(img.at(1, 1), 96);   // 3/8 * 255 = 95.625
    EXPECT_EQ(img.at(2, 0), 64);   // 2/8 * 255 = 63.75
}

TEST(FilterImage, EndpointsAlwaysHit) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const GrayImage img = filter_image(rng_gaussian<double>(rng, 14, 18, 0.3));
        EXPECT_EQ(*std::min_element(img.pixels.begin(), img.pixels.end()), 0);
        EXPECT_EQ(*std::max_element(img.pixels.begin(), img.pixels.end()), 255);
    }
}

TEST(FilterImage, ConstantWeightsAreMidGray) {
    const GrayImage img = filter_image(Matrix::Constant(3, 4, -0.2));
    EXPECT_TRUE(std::all_of(img.pixels.begin(), img.pixels.end(), [](int p) { return p == 128; }));
}

TEST(PlainPgm, FormatAndParse) {
    Matrix w(1, 2);
    w << -1.0, 1.0;
    const std::string text = to_plain_pgm(filter_image(w));
    EXPECT_EQ(text, "P2\n1 2\n255\n0\n255\n");
    const GrayImage back = parse_plain_pgm("P2\n# comment\n1 2\n255\n0 255\n");
    EXPECT_EQ(back.pixels, (std::vector<int>{0, 255}));
}

TEST(PlainPgm, RejectsMalformed) {
    EXPECT_THROW(parse_plain_pgm("P5\n1 1\n255\n0\n"), DataError);
    EXPECT_THROW(parse_plain_pgm("P2\n2 2\n255\n0 1 2\n"), DataError);
    EXPECT_THROW(parse_plain_pgm("P2\n1 1\n255\n300\n"), DataError);
}
