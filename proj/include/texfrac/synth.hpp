#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/image.hpp"
#include "texfrac/rng.hpp"

namespace texfrac {

enum class TextureKind { sierpinski, filled_rect, hline, checkerboard, stripes, rough_field };

inline const char* texture_kind_name(TextureKind k) {
    switch (k) {
        case TextureKind::sierpinski:  return "sierpinski";
        case TextureKind::filled_rect: return "filled_rect";
        case TextureKind::hline:       return "hline";
        case TextureKind::checkerboard: return "checkerboard";
        case TextureKind::stripes:     return "stripes";
        case TextureKind::rough_field: return "rough_field";
    }
    return "?";
}

/// Deterministic texture recipe. Each kind reads its own parameter
/// subset; unread fields are ignored.
///   sierpinski:   depth (size must be a power of two >= 2^depth)
///   stripes:      stripe_period (band width in pixels)
///   rough_field:  roughness in (0,1), seed, and an optional stripe
///                 overlay (contrast_gain > 0 with stripe_period)
struct TextureSpec {
    TextureKind kind = TextureKind::filled_rect;
    std::size_t size = 64;
    int depth = 3;
    std::size_t stripe_period = 2;
    double roughness = 0.5;
    int contrast_gain = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline bool is_power_of_two(std::size_t v) { return v > 0 && (v & (v - 1)) == 0; }

inline void fill_sierpinski(GrayImage& img, std::size_t x, std::size_t y, std::size_t side,
                            int depth) {
    if (depth == 0) {
        for (std::size_t yy = y; yy < y + side; ++yy)
            for (std::size_t xx = x; xx < x + side; ++xx) img.at(xx, yy) = 1;
        return;
    }
    const std::size_t half = side / 2;
    // Keep three half-scaled copies; the lower-right quadrant stays empty.
    fill_sierpinski(img, x, y, half, depth - 1);
    fill_sierpinski(img, x + half, y, half, depth - 1);
    fill_sierpinski(img, x, y + half, half, depth - 1);
}

/// Seeded midpoint displacement (diamond-square) on a (size+1)^2 lattice;
/// displacement amplitude shrinks by 2^-h per level, so lower h yields a
/// rougher surface.
inline std::vector<double> midpoint_displacement(std::size_t size, double h, std::uint64_t seed) {
    const std::size_t n = size + 1;
    std::vector<double> grid(n * n, 0.0);
    SplitMix64 rng(seed);
    auto at = [&](std::size_t x, std::size_t y) -> double& { return grid[y * n + x]; };

    double amp = 1.0;
    at(0, 0) = rng.gaussian() * amp;
    at(size, 0) = rng.gaussian() * amp;
    at(0, size) = rng.gaussian() * amp;
    at(size, size) = rng.gaussian() * amp;

    const double decay = std::pow(2.0, -h);
    for (std::size_t step = size; step > 1; step /= 2) {
        const std::size_t half = step / 2;
        amp *= decay;
        // Diamond: square centers.
        for (std::size_t y = half; y < n; y += step) {
            for (std::size_t x = half; x < n; x += step) {
                const double avg = (at(x - half, y - half) + at(x + half, y - half) +
                                    at(x - half, y + half) + at(x + half, y + half)) /
                                   4.0;
                at(x, y) = avg + rng.gaussian() * amp;
            }
        }
        // Square: edge midpoints, averaging the available axial neighbors.
        for (std::size_t y = 0; y < n; y += half) {
            const std::size_t x0 = (y / half) % 2 == 0 ? half : 0;
            for (std::size_t x = x0; x < n; x += step) {
                double sum = 0.0;
                int cnt = 0;
                if (x >= half) { sum += at(x - half, y); ++cnt; }
                if (x + half < n) { sum += at(x + half, y); ++cnt; }
                if (y >= half) { sum += at(x, y - half); ++cnt; }
                if (y + half < n) { sum += at(x, y + half); ++cnt; }
                at(x, y) = sum / cnt + rng.gaussian() * amp;
            }
        }
    }
    return grid;
}

} // namespace detail

/// Deterministic image for a TextureSpec. Geometric kinds emit two-level
/// images; rough_field emits a 256-level field affine-mapped to [0,255].
inline GrayImage generate(const TextureSpec& spec) {
    if (spec.size < 8) throw Error(errc::invalid_spec, "size must be >= 8");

    GrayImage img;
    img.width = spec.size;
    img.height = spec.size;
    img.levels = 2;
    img.pixels.assign(spec.size * spec.size, 0);

    switch (spec.kind) {
        case TextureKind::sierpinski: {
            if (spec.depth < 0) throw Error(errc::invalid_spec, "depth must be >= 0");
            if (!detail::is_power_of_two(spec.size))
                throw Error(errc::invalid_spec, "sierpinski size must be a power of two");
            if (spec.size < (std::size_t{1} << spec.depth))
                throw Error(errc::invalid_spec, "sierpinski size must be >= 2^depth");
            detail::fill_sierpinski(img, 0, 0, spec.size, spec.depth);
            return img;
        }
        case TextureKind::filled_rect: {
            std::fill(img.pixels.begin(), img.pixels.end(), std::uint8_t{1});
            return img;
        }
        case TextureKind::hline: {
            const std::size_t y = spec.size / 2;
            for (std::size_t x = 0; x < spec.size; ++x) img.at(x, y) = 1;
            return img;
        }
        case TextureKind::checkerboard: {
            for (std::size_t y = 0; y < spec.size; ++y)
                for (std::size_t x = 0; x < spec.size; ++x) img.at(x, y) = (x + y) % 2;
            return img;
        }
        case TextureKind::stripes: {
            if (spec.stripe_period < 1) throw Error(errc::invalid_spec, "stripe_period must be >= 1");
            for (std::size_t y = 0; y < spec.size; ++y)
                for (std::size_t x = 0; x < spec.size; ++x)
                    img.at(x, y) = (x / spec.stripe_period) % 2;
            return img;
        }
        case TextureKind::rough_field: {
            if (!detail::is_power_of_two(spec.size))
                throw Error(errc::invalid_spec, "rough_field size must be a power of two");
            if (!(spec.roughness > 0.0 && spec.roughness < 1.0))
                throw Error(errc::invalid_spec, "roughness must be in (0,1)");
            if (spec.contrast_gain < 0)
                throw Error(errc::invalid_spec, "contrast_gain must be >= 0");
            const auto grid = detail::midpoint_displacement(spec.size, spec.roughness, spec.seed);
            double lo = grid[0], hi = grid[0];
            for (std::size_t y = 0; y < spec.size; ++y)
                for (std::size_t x = 0; x < spec.size; ++x) {
                    const double v = grid[y * (spec.size + 1) + x];
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            img.levels = 256;
            for (std::size_t y = 0; y < spec.size; ++y) {
                for (std::size_t x = 0; x < spec.size; ++x) {
                    const double v = grid[y * (spec.size + 1) + x];
                    int g = hi == lo ? 0
                                     : static_cast<int>(std::lround((v - lo) / (hi - lo) * 255.0));
                    if (spec.contrast_gain > 0) {
                        const bool band = (x / std::max<std::size_t>(spec.stripe_period, 1)) % 2;
                        g += band ? spec.contrast_gain : -spec.contrast_gain;
                    }
                    img.at(x, y) = static_cast<std::uint8_t>(std::clamp(g, 0, 255));
                }
            }
            return img;
        }
    }
    throw Error(errc::invalid_spec, "unknown texture kind");
}

/// Compact parameter rendering for manifest files (no commas).
inline std::string texture_params_string(const TextureSpec& spec) {
    std::string out = "size=" + std::to_string(spec.size);
    switch (spec.kind) {
        case TextureKind::sierpinski:
            out += ";depth=" + std::to_string(spec.depth);
            break;
        case TextureKind::stripes:
            out += ";period=" + std::to_string(spec.stripe_period);
            break;
        case TextureKind::rough_field: {
            char buf[48];
            std::snprintf(buf, sizeof(buf), ";h=%g", spec.roughness);
            out += buf;
            out += ";gain=" + std::to_string(spec.contrast_gain);
            out += ";period=" + std::to_string(spec.stripe_period);
            out += ";seed=" + std::to_string(spec.seed);
            break;
        }
        default:
            break;
    }
    return out;
}

struct DatasetImage {
    GrayImage image;
    int label = +1;
    TextureSpec spec;
};

/// n_per_class images per class template with per-image derived seeds;
/// class A is labeled +1, class B -1. Pure function of its arguments.
inline std::vector<DatasetImage> make_dataset(const TextureSpec& class_a, const TextureSpec& class_b,
                                              std::size_t n_per_class, std::uint64_t seed) {
    if (n_per_class < 2) throw Error(errc::invalid_spec, "n_per_class must be >= 2");
    std::vector<DatasetImage> out;
    out.reserve(2 * n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) {
        TextureSpec sa = class_a;
        sa.seed = derive_seed(seed, 2 * i);
        out.push_back(DatasetImage{generate(sa), +1, sa});
        TextureSpec sb = class_b;
        sb.seed = derive_seed(seed, 2 * i + 1);
        out.push_back(DatasetImage{generate(sb), -1, sb});
    }
    return out;
}

} // namespace texfrac
