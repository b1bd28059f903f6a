#pragma once

#include "sdae/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sdae {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    int max_value = 255;
    std::vector<int> pixels;

    int at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Filter image of a (hidden x input) weight matrix: one column per hidden
/// unit, one row per input. Weights are mapped affinely min -> 0, max -> 255
/// and rounded to nearest; a constant matrix renders as uniform 128.
GrayImage filter_image(const Matrix& weights);

/// Plain "P2" portable graymap text.
std::string to_plain_pgm(const GrayImage& image);

/// Parses plain "P2" text, '#' comments allowed. Throws DataError when malformed.
GrayImage parse_plain_pgm(const std::string& text);

void write_filter_pgm(const std::filesystem::path& path, const Matrix& weights);

}  // namespace sdae
