#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "texfrac/error.hpp"

namespace texfrac {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

/// Ordinary least squares of y against x over (x, y) pairs, centered form.
/// Summation order is fixed (input order) so results are bit-reproducible.
/// r_squared is 1 when the points have no y-variance (a flat line fits
/// exactly). Requires at least 2 points with distinct x.
inline LineFit least_squares(std::span<const std::pair<double, double>> pts) {
    const std::size_t n = pts.size();
    if (n < 2) {
        throw Error(errc::degenerate_regression, "need at least 2 points, got " + std::to_string(n));
    }

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& p : pts) {
        mean_x += p.first;
        mean_y += p.second;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : pts) {
        const double dx = p.first - mean_x;
        const double dy = p.second - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw Error(errc::degenerate_regression, "all x values identical");
    }

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        const double ss_res = syy - fit.slope * sxy;
        fit.r_squared = 1.0 - ss_res / syy;
        if (fit.r_squared < 0.0) fit.r_squared = 0.0;
        if (fit.r_squared > 1.0) fit.r_squared = 1.0;
    }
    return fit;
}

} // namespace texfrac
