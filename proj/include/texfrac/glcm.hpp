#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/image.hpp"

namespace texfrac {

/// Co-occurrence displacement in pixels, y increasing downward.
struct Offset {
    int dx = 0;
    int dy = 0;
};

/// The four canonical directions (0, 45, 90, 135 degrees) at a distance d.
inline std::array<Offset, 4> direction_offsets(int distance) {
    return {Offset{distance, 0}, Offset{distance, -distance}, Offset{0, -distance},
            Offset{-distance, -distance}};
}

/// L x L co-occurrence matrix. Raw pair counts are kept alongside the
/// normalized probabilities so both forms are inspectable.
struct GLCMatrix {
    std::size_t levels = 0;
    std::vector<double> probs;          // row-major, sums to 1
    std::vector<std::uint64_t> counts;  // pre-normalization (may be empty for hand-built matrices)
    std::uint64_t total_pairs = 0;

    double prob(std::size_t i, std::size_t j) const { return probs[i * levels + j]; }
    std::uint64_t count(std::size_t i, std::size_t j) const { return counts[i * levels + j]; }
};

/// The four Haralick statistics of a symmetric normalized GLCM.
/// Correlation carries an explicit undefined state for sigma^2 = 0
/// (constant texture) instead of a silent NaN.
struct GlcmFeatures {
    double contrast = 0.0;
    std::optional<double> correlation;
    double energy = 0.0;
    double homogeneity = 0.0;
};

/// count[i][j] = number of positions p with img[p] = i and img[p+off] = j;
/// pairs stepping outside the image are skipped. Symmetric mode also
/// accumulates the reversed offset, making the matrix equal to its
/// transpose.
inline GLCMatrix compute_glcm(const GrayImage& img, Offset off, bool symmetric) {
    check_image(img);
    if (off.dx == 0 && off.dy == 0)
        throw Error(errc::invalid_argument, "offset must be nonzero");

    const std::size_t nlev = img.levels;
    GLCMatrix m;
    m.levels = nlev;
    m.counts.assign(nlev * nlev, 0);

    const long w = static_cast<long>(img.width);
    const long h = static_cast<long>(img.height);
    for (long y = 0; y < h; ++y) {
        const long ny = y + off.dy;
        if (ny < 0 || ny >= h) continue;
        for (long x = 0; x < w; ++x) {
            const long nx = x + off.dx;
            if (nx < 0 || nx >= w) continue;
            const std::size_t i = img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
            const std::size_t j = img.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny));
            m.counts[i * nlev + j]++;
            if (symmetric) m.counts[j * nlev + i]++;
            m.total_pairs += symmetric ? 2 : 1;
        }
    }
    if (m.total_pairs == 0)
        throw Error(errc::no_valid_pairs, "offset (" + std::to_string(off.dx) + "," +
                                              std::to_string(off.dy) + ") leaves no valid pairs");

    m.probs.resize(m.counts.size());
    for (std::size_t k = 0; k < m.counts.size(); ++k)
        m.probs[k] = static_cast<double>(m.counts[k]) / static_cast<double>(m.total_pairs);
    return m;
}

/// Contrast, correlation, energy, homogeneity of a normalized symmetric
/// GLCM, with mu and sigma^2 the marginal mean/variance of the reference
/// pixel intensity.
inline GlcmFeatures haralick_features(const GLCMatrix& m) {
    if (m.levels == 0 || m.probs.size() != m.levels * m.levels)
        throw Error(errc::invalid_argument, "malformed GLCM");
    double sum = 0.0;
    for (double p : m.probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(errc::not_normalized, "probabilities sum to " + std::to_string(sum));

    const std::size_t nlev = m.levels;
    double mu = 0.0;
    for (std::size_t i = 0; i < nlev; ++i)
        for (std::size_t j = 0; j < nlev; ++j) mu += static_cast<double>(i) * m.prob(i, j);

    double sigma_sq = 0.0;
    for (std::size_t i = 0; i < nlev; ++i) {
        const double di = static_cast<double>(i) - mu;
        for (std::size_t j = 0; j < nlev; ++j) sigma_sq += m.prob(i, j) * di * di;
    }

    GlcmFeatures f;
    double corr = 0.0;
    for (std::size_t i = 0; i < nlev; ++i) {
        const double di = static_cast<double>(i) - mu;
        for (std::size_t j = 0; j < nlev; ++j) {
            const double p = m.prob(i, j);
            const double dij = static_cast<double>(i) - static_cast<double>(j);
            f.contrast += p * dij * dij;
            f.energy += p * p;
            f.homogeneity += p / (1.0 + dij * dij);
            corr += p * di * (static_cast<double>(j) - mu);
        }
    }
    if (sigma_sq != 0.0) f.correlation = corr / sigma_sq;
    return f;
}

/// The protocol used for feature extraction: quantize, build the symmetric
/// GLCM for each of the four directions at the given distance, and average
/// the four feature values. An undefined correlation in any direction
/// makes the averaged correlation undefined.
inline GlcmFeatures averaged_features(const GrayImage& img, int distance, std::size_t levels) {
    check_image(img);
    if (distance < 1) throw Error(errc::invalid_argument, "distance must be >= 1");
    if (levels < 2) throw Error(errc::invalid_levels, "levels must be >= 2");

    // Images already at or below the requested level count pass through:
    // feature sums depend only on occupied cells, so a tight matrix is
    // equivalent to a padded one.
    const GrayImage& base = img;
    GrayImage reduced;
    const GrayImage* src = &base;
    if (levels < img.levels) {
        reduced = quantize(img, levels);
        src = &reduced;
    }

    GlcmFeatures acc;
    bool any_undefined = false;
    double corr_sum = 0.0;
    for (const Offset& off : direction_offsets(distance)) {
        const GLCMatrix m = compute_glcm(*src, off, /*symmetric=*/true);
        const GlcmFeatures f = haralick_features(m);
        acc.contrast += f.contrast;
        acc.energy += f.energy;
        acc.homogeneity += f.homogeneity;
        if (f.correlation)
            corr_sum += *f.correlation;
        else
            any_undefined = true;
    }
    acc.contrast /= 4.0;
    acc.energy /= 4.0;
    acc.homogeneity /= 4.0;
    if (!any_undefined) acc.correlation = corr_sum / 4.0;
    return acc;
}

/// CSV cells "contrast,correlation,energy,homogeneity"; the correlation
/// cell is empty when undefined.
inline std::string glcm_features_csv(const GlcmFeatures& f) {
    char buf[160];
    if (f.correlation) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", f.contrast, *f.correlation,
                      f.energy, f.homogeneity);
    } else {
        std::snprintf(buf, sizeof(buf), "%.17g,,%.17g,%.17g", f.contrast, f.energy, f.homogeneity);
    }
    return buf;
}

} // namespace texfrac
