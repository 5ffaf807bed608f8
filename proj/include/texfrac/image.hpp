#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "texfrac/error.hpp"

namespace texfrac {

/// Rectangular grid of quantized intensities, row-major, top-left origin.
/// Invariants: pixels.size() == width*height, every value < levels,
/// 2 <= levels <= 256.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t levels = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    std::size_t pixel_count() const { return width * height; }

    bool operator==(const GrayImage&) const = default;
};

/// A GrayImage restricted to {0,1}.
struct BinaryImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;

    std::uint8_t at(std::size_t x, std::size_t y) const { return bits[y * width + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) { return bits[y * width + x]; }
    std::size_t pixel_count() const { return width * height; }

    std::size_t set_count() const {
        std::size_t n = 0;
        for (std::uint8_t b : bits) n += b;
        return n;
    }

    bool operator==(const BinaryImage&) const = default;
};

/// Axis-aligned sub-window: top-left offset plus extent.
struct Rect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
};

inline void check_image(const GrayImage& img) {
    if (img.width < 1 || img.height < 1)
        throw Error(errc::invalid_argument, "image must be at least 1x1");
    if (img.levels < 2 || img.levels > 256)
        throw Error(errc::invalid_levels, "levels must be in [2,256], got " + std::to_string(img.levels));
    if (img.pixels.size() != img.width * img.height)
        throw Error(errc::invalid_argument, "pixel buffer size does not match dimensions");
    for (std::uint8_t p : img.pixels)
        if (p >= img.levels)
            throw Error(errc::invalid_pixel,
                        "pixel value " + std::to_string(p) + " >= levels " + std::to_string(img.levels));
}

/// Uniform-binning requantization: p -> floor(p * target / levels).
/// Monotone, idempotent at a fixed target.
inline GrayImage quantize(const GrayImage& img, std::size_t target_levels) {
    check_image(img);
    if (target_levels < 2 || target_levels > img.levels)
        throw Error(errc::invalid_levels,
                    "target_levels must be in [2," + std::to_string(img.levels) + "], got " +
                        std::to_string(target_levels));
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.levels = target_levels;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = static_cast<std::uint8_t>(
            static_cast<std::size_t>(img.pixels[i]) * target_levels / img.levels);
    }
    return out;
}

/// Otsu threshold: the smallest t in [1, levels-1] maximizing the
/// between-class variance of {p < t} vs {p >= t}.
inline std::size_t otsu_threshold(const GrayImage& img) {
    check_image(img);
    std::vector<std::uint64_t> hist(img.levels, 0);
    for (std::uint8_t p : img.pixels) hist[p]++;

    const double total = static_cast<double>(img.pixel_count());
    double sum_all = 0.0;
    for (std::size_t v = 0; v < img.levels; ++v) sum_all += static_cast<double>(v) * static_cast<double>(hist[v]);

    std::size_t best_t = 1;
    double best_var = -1.0;
    double w0 = 0.0;   // pixels below t
    double sum0 = 0.0; // intensity mass below t
    for (std::size_t t = 1; t < img.levels; ++t) {
        w0 += static_cast<double>(hist[t - 1]);
        sum0 += static_cast<double>(t - 1) * static_cast<double>(hist[t - 1]);
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

/// bit = 1 iff pixel >= threshold. Empty threshold selects Otsu's value.
inline BinaryImage threshold_binarize(const GrayImage& img,
                                      std::optional<std::size_t> threshold = std::nullopt) {
    check_image(img);
    std::size_t t;
    if (threshold) {
        t = *threshold;
        if (t >= img.levels)
            throw Error(errc::invalid_argument,
                        "threshold " + std::to_string(t) + " not below levels " + std::to_string(img.levels));
    } else {
        t = otsu_threshold(img);
    }
    BinaryImage out;
    out.width = img.width;
    out.height = img.height;
    out.bits.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.bits[i] = img.pixels[i] >= t ? 1 : 0;
    return out;
}

inline GrayImage crop_roi(const GrayImage& img, const Rect& roi) {
    check_image(img);
    if (roi.w < 1 || roi.h < 1 || roi.x + roi.w > img.width || roi.y + roi.h > img.height)
        throw Error(errc::invalid_roi, "rect (" + std::to_string(roi.x) + "," + std::to_string(roi.y) +
                                           "," + std::to_string(roi.w) + "," + std::to_string(roi.h) +
                                           ") out of bounds for " + std::to_string(img.width) + "x" +
                                           std::to_string(img.height));
    GrayImage out;
    out.width = roi.w;
    out.height = roi.h;
    out.levels = img.levels;
    out.pixels.resize(roi.w * roi.h);
    for (std::size_t y = 0; y < roi.h; ++y)
        for (std::size_t x = 0; x < roi.w; ++x) out.at(x, y) = img.at(roi.x + x, roi.y + y);
    return out;
}

/// View a two-level image as binary. Levels must equal 2.
inline BinaryImage as_binary(const GrayImage& img) {
    check_image(img);
    if (img.levels != 2)
        throw Error(errc::invalid_levels, "as_binary requires a 2-level image");
    BinaryImage out;
    out.width = img.width;
    out.height = img.height;
    out.bits = img.pixels;
    return out;
}

} // namespace texfrac
