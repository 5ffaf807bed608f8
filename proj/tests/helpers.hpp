#pragma once

// Shared fixtures for the unit suite. Oracles in individual test files are
// written against raw pixel loops, independent of the library's fast paths.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/image.hpp"
#include "texfrac/rng.hpp"

namespace testutil {

inline texfrac::GrayImage make_gray(std::size_t w, std::size_t h, std::size_t levels,
                                    std::vector<std::uint8_t> pixels) {
    texfrac::GrayImage img;
    img.width = w;
    img.height = h;
    img.levels = levels;
    img.pixels = std::move(pixels);
    return img;
}

inline texfrac::BinaryImage make_binary(std::size_t w, std::size_t h,
                                        std::vector<std::uint8_t> bits) {
    texfrac::BinaryImage img;
    img.width = w;
    img.height = h;
    img.bits = std::move(bits);
    return img;
}

inline texfrac::GrayImage random_gray(texfrac::SplitMix64& rng, std::size_t w, std::size_t h,
                                      std::size_t levels) {
    texfrac::GrayImage img;
    img.width = w;
    img.height = h;
    img.levels = levels;
    img.pixels.resize(w * h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(levels));
    return img;
}

inline texfrac::BinaryImage random_binary(texfrac::SplitMix64& rng, std::size_t w, std::size_t h,
                                          double density = 0.5) {
    texfrac::BinaryImage img;
    img.width = w;
    img.height = h;
    img.bits.resize(w * h);
    for (auto& b : img.bits) b = rng.uniform01() < density ? 1 : 0;
    return img;
}

/// Runs f and returns the texfrac error code it throws; fails the caller
/// if nothing was thrown.
template <typename F>
texfrac::errc error_code_of(F&& f) {
    try {
        f();
    } catch (const texfrac::Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a texfrac::Error but none was thrown");
}

} // namespace testutil
