#pragma once

#include "sdae/linalg.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

namespace sdae {

/// splitmix64 finalizer; used for seeding and stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Purposes for which an independent stream is split off a root seed.
enum class StreamPurpose : std::uint64_t {
    Init = 1,
    Corruption = 2,
    Shuffle = 3,
    Folds = 4,
    Data = 5,
};

/// Deterministic xoshiro256** generator.
///
/// The four state words are filled from the seed by successive splitmix64
/// steps. Doubles take the top 53 bits of a draw, so uniform() lies in [0, 1).
/// Gaussian draws use the Box-Muller transform and cache the second variate.
/// Nothing here depends on the standard library's engines or distributions, so
/// a given seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix64(s);
        }
    }

    /// Seed of an independent stream for (root, purpose, index).
    static std::uint64_t derive_seed(std::uint64_t root, StreamPurpose purpose, std::uint64_t index = 0) {
        std::uint64_t h = mix64(root ^ 0x6a09e667f3bcc908ULL);
        h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0x9e3779b97f4a7c15ULL));
        return mix64(h ^ (index + 0x3c6ef372fe94f82bULL));
    }

    static Rng derive(std::uint64_t root, StreamPurpose purpose, std::uint64_t index = 0) {
        return Rng(derive_seed(root, purpose, index));
    }

    /// A child generator seeded from this stream's next draw.
    Rng split() { return Rng(next_u64()); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        const double v = lo + (hi - lo) * uniform();
        // Rounding can land exactly on hi for some (lo, hi).
        return v < hi ? v : std::nextafter(hi, lo);
    }

    /// Uniform integer in [0, bound) by rejection, free of modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0)
            throw ParameterError("Rng::below: bound must be positive");
        const std::uint64_t limit = -bound % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= limit)
                return r % bound;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i)
            order[i] = i;
        shuffle(order);
        return order;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// i.i.d. uniform samples in [lo, hi), filled row-major.
template <typename Scalar = double>
MatrixX<Scalar> rng_uniform(Rng& rng, Eigen::Index rows, Eigen::Index cols, Scalar lo, Scalar hi) {
    if (!(lo < hi))
        throw ParameterError("rng_uniform: lo must be below hi");
    if (rows < 0 || cols < 0)
        throw ParameterError("rng_uniform: negative shape");
    MatrixX<Scalar> out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            out(i, j) = static_cast<Scalar>(rng.uniform(static_cast<double>(lo), static_cast<double>(hi)));
    return out;
}

/// i.i.d. N(0, sigma^2) samples, filled row-major.
template <typename Scalar = double>
MatrixX<Scalar> rng_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, Scalar sigma) {
    if (sigma < 0)
        throw ParameterError("rng_gaussian: sigma must be non-negative");
    if (rows < 0 || cols < 0)
        throw ParameterError("rng_gaussian: negative shape");
    MatrixX<Scalar> out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            out(i, j) = static_cast<Scalar>(sigma * rng.gaussian());
    return out;
}

}  // namespace sdae
