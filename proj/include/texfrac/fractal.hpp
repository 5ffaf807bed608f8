#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/image.hpp"
#include "texfrac/linreg.hpp"

namespace texfrac {

/// Result of a log-log box-counting regression. `points` holds the
/// (ln(1/lambda), ln N(lambda)) pairs actually used, so the slope can be
/// recomputed independently; `box_sizes`/`box_counts` keep the raw data
/// for CSV dumps.
struct FractalEstimate {
    double dimension = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points; // (log_inv_scale, log_count)
    std::vector<std::size_t> box_sizes;
    std::vector<std::uint64_t> box_counts;
};

/// Per-pixel Hoelder exponents. Pixels whose measure vanishes at every
/// usable scale carry +infinity and are excluded from spectrum binning.
struct HolderImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> alpha;

    double at(std::size_t x, std::size_t y) const { return alpha[y * width + x]; }
};

struct SpectrumBin {
    double alpha_center = 0.0;
    double f_alpha = 0.0;
    std::size_t pixels = 0; // level-set cardinality
};

/// f(alpha) spectrum: one entry per non-empty alpha bin, sorted by
/// ascending alpha_center. `excluded_pixels` counts sentinel-alpha pixels
/// that took part in no bin.
struct MultifractalSpectrum {
    std::vector<SpectrumBin> bins;
    double bin_width = 0.0;
    std::size_t excluded_pixels = 0;
};

/// Number of box_size x box_size grid cells containing at least one set
/// bit. The grid is anchored at (0,0); ragged cells at the right/bottom
/// edges count as boxes, so box_count at size 1 equals the set-pixel count.
inline std::uint64_t box_count(const BinaryImage& img, std::size_t box_size) {
    if (box_size < 1) throw Error(errc::invalid_argument, "box_size must be >= 1");
    const std::size_t cells_x = (img.width + box_size - 1) / box_size;
    const std::size_t cells_y = (img.height + box_size - 1) / box_size;
    std::vector<std::uint8_t> occupied(cells_x * cells_y, 0);
    for (std::size_t y = 0; y < img.height; ++y) {
        const std::size_t cy = y / box_size;
        for (std::size_t x = 0; x < img.width; ++x) {
            if (img.at(x, y)) occupied[cy * cells_x + x / box_size] = 1;
        }
    }
    std::uint64_t n = 0;
    for (std::uint8_t o : occupied) n += o;
    return n;
}

/// Powers of two from 1 up to min(width, height)/2 — the default scale
/// cascade for box-counting regressions.
inline std::vector<std::size_t> default_box_sizes(std::size_t width, std::size_t height) {
    const std::size_t limit = std::min(width, height) / 2;
    std::vector<std::size_t> sizes;
    for (std::size_t s = 1; s <= limit; s *= 2) sizes.push_back(s);
    if (sizes.size() < 2) {
        // Tiny images: fall back to the two smallest usable scales.
        sizes = {1, 2};
    }
    return sizes;
}

/// Least-squares slope of ln N(lambda) against ln(1/lambda) over the given
/// box sizes. Working in ln(1/lambda) makes the slope the dimension
/// directly. Sizes yielding N = 0 are dropped before the fit.
inline FractalEstimate box_counting_dimension(const BinaryImage& img,
                                              const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> uniq(sizes);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 2)
        throw Error(errc::invalid_argument, "need at least 2 distinct box sizes");
    for (std::size_t s : uniq) {
        if (s < 1 || s > std::min(img.width, img.height))
            throw Error(errc::invalid_argument,
                        "box size " + std::to_string(s) + " outside [1, min(w,h)]");
    }

    bool any_set = false;
    for (std::uint8_t b : img.bits)
        if (b) { any_set = true; break; }
    if (!any_set) throw Error(errc::empty_support, "image has no set bits");

    FractalEstimate est;
    for (std::size_t s : uniq) {
        const std::uint64_t n = box_count(img, s);
        if (n == 0) continue;
        est.box_sizes.push_back(s);
        est.box_counts.push_back(n);
        est.points.emplace_back(-std::log(static_cast<double>(s)),
                                std::log(static_cast<double>(n)));
    }
    if (est.points.size() < 2)
        throw Error(errc::degenerate_regression, "fewer than 2 usable scales");

    LineFit fit;
    try {
        fit = least_squares(est.points);
    } catch (const Error&) {
        throw Error(errc::degenerate_regression, "box-count regression is degenerate");
    }
    est.dimension = fit.slope;
    est.r_squared = fit.r_squared;
    return est;
}

inline FractalEstimate box_counting_dimension(const BinaryImage& img) {
    return box_counting_dimension(img, default_box_sizes(img.width, img.height));
}

/// CSV form of a FractalEstimate: one "lambda,count" row per usable scale
/// and a trailing "dimension,r2" record (log-log curve dump).
inline std::string fractal_estimate_csv(const FractalEstimate& est) {
    std::string out = "lambda,count\n";
    for (std::size_t i = 0; i < est.box_sizes.size(); ++i) {
        out += std::to_string(est.box_sizes[i]) + "," + std::to_string(est.box_counts[i]) + "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", est.dimension, est.r_squared);
    out += "dimension,r2\n";
    out += buf;
    return out;
}

namespace detail {

// Box sums with clamp-to-edge addressing: the window around a border pixel
// replicates edge samples, so a constant image measures like an interior
// window at every pixel. Sliding update keeps each pass O(w*h).
inline std::vector<double> clamped_box_sum(const std::vector<double>& src, std::size_t width,
                                           std::size_t height, std::size_t radius) {
    auto clamp_idx = [](long v, long hi) {
        if (v < 0) return 0L;
        if (v > hi) return hi;
        return v;
    };
    std::vector<double> horiz(src.size());
    const long r = static_cast<long>(radius);
    const long wmax = static_cast<long>(width) - 1;
    for (std::size_t y = 0; y < height; ++y) {
        const double* row = &src[y * width];
        double s = 0.0;
        for (long d = -r; d <= r; ++d) s += row[clamp_idx(d, wmax)];
        horiz[y * width] = s;
        for (long x = 1; x < static_cast<long>(width); ++x) {
            s += row[clamp_idx(x + r, wmax)] - row[clamp_idx(x - 1 - r, wmax)];
            horiz[y * width + static_cast<std::size_t>(x)] = s;
        }
    }
    std::vector<double> out(src.size());
    const long hmax = static_cast<long>(height) - 1;
    for (std::size_t x = 0; x < width; ++x) {
        double s = 0.0;
        for (long d = -r; d <= r; ++d) s += horiz[static_cast<std::size_t>(clamp_idx(d, hmax)) * width + x];
        out[x] = s;
        for (long y = 1; y < static_cast<long>(height); ++y) {
            s += horiz[static_cast<std::size_t>(clamp_idx(y + r, hmax)) * width + x] -
                 horiz[static_cast<std::size_t>(clamp_idx(y - 1 - r, hmax)) * width + x];
            out[static_cast<std::size_t>(y) * width + x] = s;
        }
    }
    return out;
}

} // namespace detail

/// Per-pixel Hoelder exponent: slope of ln mu against ln lambda, where mu
/// is the intensity mass (normalized by total image intensity) in the
/// centered window and lambda = window side / max(width, height). Scales
/// with zero mass are skipped; pixels left with fewer than two usable
/// scales get the +infinity sentinel.
inline HolderImage holder_image(const GrayImage& img, const std::vector<std::size_t>& window_sizes) {
    check_image(img);
    if (window_sizes.size() < 2)
        throw Error(errc::invalid_argument, "need at least 2 window sizes");
    for (std::size_t i = 0; i < window_sizes.size(); ++i) {
        if (window_sizes[i] < 1 || window_sizes[i] % 2 == 0)
            throw Error(errc::invalid_argument, "window sizes must be odd and >= 1");
        if (i > 0 && window_sizes[i] <= window_sizes[i - 1])
            throw Error(errc::invalid_argument, "window sizes must be strictly ascending");
    }

    double total = 0.0;
    std::vector<double> intensity(img.pixel_count());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        intensity[i] = static_cast<double>(img.pixels[i]);
        total += intensity[i];
    }
    if (total == 0.0) throw Error(errc::zero_measure, "total image intensity is zero");

    const double longest = static_cast<double>(std::max(img.width, img.height));
    std::vector<std::vector<double>> sums;
    std::vector<double> log_lambda;
    sums.reserve(window_sizes.size());
    for (std::size_t s : window_sizes) {
        sums.push_back(detail::clamped_box_sum(intensity, img.width, img.height, (s - 1) / 2));
        log_lambda.push_back(std::log(static_cast<double>(s) / longest));
    }

    HolderImage out;
    out.width = img.width;
    out.height = img.height;
    out.alpha.resize(img.pixel_count());
    std::vector<std::pair<double, double>> pts;
    pts.reserve(window_sizes.size());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        pts.clear();
        for (std::size_t k = 0; k < window_sizes.size(); ++k) {
            const double mu = sums[k][i] / total;
            if (mu > 0.0) pts.emplace_back(log_lambda[k], std::log(mu));
        }
        if (pts.size() < 2) {
            out.alpha[i] = std::numeric_limits<double>::infinity();
        } else {
            out.alpha[i] = least_squares(pts).slope;
        }
    }
    return out;
}

/// f(alpha) spectrum: the finite-alpha range is split into n_bins equal
/// bins, each bin's level set is treated as a binary image, and f is its
/// box-counting dimension over `sizes`. Empty bins emit no entry. A zero
/// alpha range collapses to a single bin covering the full support.
inline MultifractalSpectrum multifractal_spectrum(const HolderImage& h, std::size_t n_bins,
                                                  const std::vector<std::size_t>& sizes) {
    if (n_bins < 1) throw Error(errc::invalid_argument, "n_bins must be >= 1");
    if (h.width < 1 || h.height < 1 || h.alpha.size() != h.width * h.height)
        throw Error(errc::invalid_argument, "malformed HolderImage");

    double amin = std::numeric_limits<double>::infinity();
    double amax = -std::numeric_limits<double>::infinity();
    std::size_t finite = 0;
    for (double a : h.alpha) {
        if (!std::isfinite(a)) continue;
        ++finite;
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }

    MultifractalSpectrum spec;
    spec.excluded_pixels = h.alpha.size() - finite;
    if (finite == 0) {
        throw Error(errc::empty_support, "no finite Hoelder exponents");
    }

    const double range = amax - amin;
    const std::size_t bins = range == 0.0 ? 1 : n_bins;
    spec.bin_width = range == 0.0 ? 1.0 : range / static_cast<double>(bins);

    std::vector<std::size_t> counts(bins, 0);
    std::vector<BinaryImage> levels(bins);
    for (auto& lv : levels) {
        lv.width = h.width;
        lv.height = h.height;
        lv.bits.assign(h.alpha.size(), 0);
    }
    for (std::size_t i = 0; i < h.alpha.size(); ++i) {
        const double a = h.alpha[i];
        if (!std::isfinite(a)) continue;
        std::size_t idx = range == 0.0
                              ? 0
                              : static_cast<std::size_t>((a - amin) / spec.bin_width);
        if (idx >= bins) idx = bins - 1; // a == amax lands in the last bin
        levels[idx].bits[i] = 1;
        counts[idx]++;
    }

    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        SpectrumBin entry;
        entry.alpha_center = range == 0.0 ? amin : amin + (static_cast<double>(b) + 0.5) * spec.bin_width;
        entry.pixels = counts[b];
        entry.f_alpha = box_counting_dimension(levels[b], sizes).dimension;
        spec.bins.push_back(entry);
    }
    return spec;
}

/// Reduces a spectrum to the fixed-length descriptor used in feature
/// fusion: (alpha at peak f, peak f, alpha spread). Ties on f resolve to
/// the smallest alpha.
inline void spectrum_summary(const MultifractalSpectrum& s, double& alpha_peak, double& f_max,
                             double& width) {
    if (s.bins.empty()) throw Error(errc::invalid_argument, "empty spectrum");
    alpha_peak = s.bins.front().alpha_center;
    f_max = s.bins.front().f_alpha;
    for (const auto& b : s.bins) {
        if (b.f_alpha > f_max) {
            f_max = b.f_alpha;
            alpha_peak = b.alpha_center;
        }
    }
    width = s.bins.back().alpha_center - s.bins.front().alpha_center;
}

} // namespace texfrac
