#include "sdae/pgm.hpp"

#include "sdae/data.hpp"
#include "sdae/model_io.hpp"

#include <cmath>
#include <sstream>

namespace sdae {

GrayImage filter_image(const Matrix& weights) {
    if (weights.size() == 0)
        throw ParameterError("filter_image: empty weight matrix");
    GrayImage image;
    image.width = static_cast<std::size_t>(weights.rows());
    image.height = static_cast<std::size_t>(weights.cols());
    image.pixels.resize(image.width * image.height);

    const double lo = weights.minCoeff();
    const double hi = weights.maxCoeff();
    const double range = hi - lo;
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c) {
            const double w = weights(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r));
            const int px = range > 0.0 ? static_cast<int>(std::lround((w - lo) / range * 255.0)) : 128;
            image.pixels[r * image.width + c] = px;
        }
    }
    return image;
}

std::string to_plain_pgm(const GrayImage& image) {
    std::ostringstream out;
    out << "P2\n" << image.width << ' ' << image.height << '\n' << image.max_value << '\n';
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c)
            out << (c ? " " : "") << image.at(r, c);
        out << '\n';
    }
    return out.str();
}

namespace {

/// Whitespace-separated tokens with '#' comments removed.
std::vector<std::string> pgm_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream words(line);
        std::string word;
        while (words >> word)
            tokens.push_back(word);
    }
    return tokens;
}

long parse_int(const std::string& token, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || value < 0)
        throw DataError(std::string("pgm: invalid ") + what + " '" + token + "'");
    return value;
}

}  // namespace

GrayImage parse_plain_pgm(const std::string& text) {
    const auto tokens = pgm_tokens(text);
    if (tokens.size() < 4 || tokens[0] != "P2")
        throw DataError("pgm: missing P2 header");
    GrayImage image;
    image.width = static_cast<std::size_t>(parse_int(tokens[1], "width"));
    image.height = static_cast<std::size_t>(parse_int(tokens[2], "height"));
    image.max_value = static_cast<int>(parse_int(tokens[3], "max value"));
    if (image.width == 0 || image.height == 0 || image.max_value == 0 || image.max_value > 65535)
        throw DataError("pgm: invalid header values");
    if (tokens.size() - 4 != image.width * image.height)
        throw DataError("pgm: expected " + std::to_string(image.width * image.height) + " pixels, found " +
                        std::to_string(tokens.size() - 4));
    image.pixels.reserve(image.width * image.height);
    for (std::size_t i = 4; i < tokens.size(); ++i) {
        const long px = parse_int(tokens[i], "pixel");
        if (px > image.max_value)
            throw DataError("pgm: pixel " + tokens[i] + " exceeds max value");
        image.pixels.push_back(static_cast<int>(px));
    }
    return image;
}

void write_filter_pgm(const std::filesystem::path& path, const Matrix& weights) {
    write_text_file(path, to_plain_pgm(filter_image(weights)));
}

}  // namespace sdae
