#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/fractal.hpp"
#include "texfrac/glcm.hpp"

namespace texfrac {

inline constexpr std::size_t kFeatureArity = 8;
inline constexpr std::size_t kCorrelationSlot = 5;

/// Fused per-image descriptor, fixed order:
/// [fractal_dim, alpha_peak, f_max, spectrum_width,
///  contrast, correlation, energy, homogeneity].
/// An undefined GLCM correlation is stored as 0.
struct FeatureVector {
    double fractal_dim = 0.0;
    double alpha_peak = 0.0;
    double f_max = 0.0;
    double spectrum_width = 0.0;
    double contrast = 0.0;
    double correlation = 0.0;
    double energy = 0.0;
    double homogeneity = 0.0;

    std::array<double, kFeatureArity> as_array() const {
        return {fractal_dim, alpha_peak, f_max, spectrum_width,
                contrast,    correlation, energy, homogeneity};
    }
    std::vector<double> as_vector() const {
        const auto a = as_array();
        return std::vector<double>(a.begin(), a.end());
    }
};

/// Label convention: Normal = +1, Abnormal = -1.
struct LabeledSample {
    std::vector<double> features;
    int label = +1;
};

enum class FeatureFamily { fractal, glcm, combined };

/// Active-dimension mask over the 8-slot FeatureVector.
inline std::vector<bool> family_mask(FeatureFamily fam) {
    std::vector<bool> mask(kFeatureArity, false);
    const std::size_t lo = fam == FeatureFamily::glcm ? 4 : 0;
    const std::size_t hi = fam == FeatureFamily::fractal ? 4 : kFeatureArity;
    for (std::size_t i = lo; i < hi; ++i) mask[i] = true;
    return mask;
}

inline FeatureVector fuse_features(const FractalEstimate& fractal, const MultifractalSpectrum& spectrum,
                                   const GlcmFeatures& glcm) {
    FeatureVector v;
    v.fractal_dim = fractal.dimension;
    spectrum_summary(spectrum, v.alpha_peak, v.f_max, v.spectrum_width);
    v.contrast = glcm.contrast;
    v.correlation = glcm.correlation.value_or(0.0);
    v.energy = glcm.energy;
    v.homogeneity = glcm.homogeneity;
    return v;
}

/// Per-dimension z-score statistics. Constant dimensions keep stddev 1 so
/// apply() passes them through centered.
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != mean.size())
            throw Error(errc::shape_error, "arity " + std::to_string(x.size()) + " vs normalizer " +
                                               std::to_string(mean.size()));
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / stddev[i];
        return out;
    }
};

/// Fits population-stddev z-score statistics. Dimensions listed in
/// zero_as_missing treat exact-0 entries as missing values (the undefined
/// correlation marker) and fit on the remaining entries only.
inline Normalizer fit_normalizer(std::span<const LabeledSample> samples,
                                 std::span<const std::size_t> zero_as_missing = {}) {
    if (samples.size() < 2)
        throw Error(errc::too_few_samples, "need >= 2 samples, got " + std::to_string(samples.size()));
    const std::size_t arity = samples[0].features.size();
    for (const auto& s : samples)
        if (s.features.size() != arity)
            throw Error(errc::shape_error, "inconsistent feature arity");

    Normalizer n;
    n.mean.assign(arity, 0.0);
    n.stddev.assign(arity, 1.0);
    for (std::size_t d = 0; d < arity; ++d) {
        bool skip_zeros = false;
        for (std::size_t z : zero_as_missing) skip_zeros |= (z == d);
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& s : samples) {
            if (skip_zeros && s.features[d] == 0.0) continue;
            sum += s.features[d];
            ++count;
        }
        if (count == 0) continue; // all missing: identity stats
        const double mean = sum / static_cast<double>(count);
        double var = 0.0;
        for (const auto& s : samples) {
            if (skip_zeros && s.features[d] == 0.0) continue;
            const double dd = s.features[d] - mean;
            var += dd * dd;
        }
        var /= static_cast<double>(count);
        n.mean[d] = mean;
        n.stddev[d] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return n;
}

struct SvmTrainConfig {
    double c_param = 1.0;
    std::size_t iterations = 100000;
    std::vector<bool> mask;                    // empty = all dimensions active
    std::vector<std::size_t> zero_as_missing;  // forwarded to fit_normalizer
};

/// Trained linear classifier. Weights outside the training mask are zero,
/// so masked-out feature slots never influence predictions.
struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    double c_param = 1.0;
    std::vector<bool> mask;
    Normalizer normalizer;

    // Training diagnostics; not part of the serialized format.
    double objective_initial = 0.0;
    double objective_final = 0.0;
};

/// Primal soft-margin objective lambda/2 ||w||^2 + mean hinge, with
/// lambda = 1 / (C n). The bias is unregularized.
inline double svm_primal_objective(std::span<const double> w, double b,
                                   std::span<const std::vector<double>> xs,
                                   std::span<const int> ys, double c_param) {
    const double n = static_cast<double>(xs.size());
    const double lambda = 1.0 / (c_param * n);
    double norm_sq = 0.0;
    for (double v : w) norm_sq += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double score = b;
        for (std::size_t d = 0; d < w.size(); ++d) score += w[d] * xs[i][d];
        const double margin = static_cast<double>(ys[i]) * score;
        if (margin < 1.0) hinge += 1.0 - margin;
    }
    return 0.5 * lambda * norm_sq + hinge / n;
}

/// Deterministic full-batch subgradient descent on the primal hinge-loss
/// objective: step 1/(lambda t), zero initialization, projection onto the
/// ||w|| <= 1/sqrt(lambda) ball, tail-averaged iterate over the second
/// half of the schedule. No randomness: identical inputs give
/// bit-identical models.
inline SvmModel fit_linear_svm(std::span<const LabeledSample> samples, const SvmTrainConfig& cfg) {
    if (cfg.c_param <= 0.0) throw Error(errc::invalid_argument, "C must be positive");
    if (cfg.iterations < 1) throw Error(errc::invalid_argument, "iterations must be >= 1");
    bool pos = false, neg = false;
    for (const auto& s : samples) {
        if (s.label == +1) pos = true;
        else if (s.label == -1) neg = true;
        else throw Error(errc::invalid_argument, "labels must be +1 or -1");
    }
    if (!pos || !neg) throw Error(errc::degenerate_labels, "both classes must be present");

    const std::size_t arity = samples[0].features.size();
    std::vector<bool> mask = cfg.mask.empty() ? std::vector<bool>(arity, true) : cfg.mask;
    if (mask.size() != arity) throw Error(errc::shape_error, "mask arity mismatch");

    SvmModel model;
    model.c_param = cfg.c_param;
    model.mask = mask;
    model.normalizer = fit_normalizer(samples, cfg.zero_as_missing);

    // Pre-normalize and zero out masked dimensions once.
    std::vector<std::vector<double>> xs(samples.size());
    std::vector<int> ys(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        xs[i] = model.normalizer.apply(samples[i].features);
        for (std::size_t d = 0; d < arity; ++d)
            if (!mask[d]) xs[i][d] = 0.0;
        ys[i] = samples[i].label;
    }

    const double n = static_cast<double>(samples.size());
    const double lambda = 1.0 / (cfg.c_param * n);
    const double radius = 1.0 / std::sqrt(lambda);

    std::vector<double> w(arity, 0.0);
    double b = 0.0;
    std::vector<double> w_avg(arity, 0.0);
    double b_avg = 0.0;
    const std::size_t tail_start = cfg.iterations / 2;
    std::size_t tail_count = 0;

    model.objective_initial = svm_primal_objective(w, b, xs, ys, cfg.c_param);

    std::vector<double> grad(arity);
    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        for (std::size_t d = 0; d < arity; ++d) grad[d] = lambda * w[d];
        double grad_b = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double score = b;
            for (std::size_t d = 0; d < arity; ++d) score += w[d] * xs[i][d];
            if (static_cast<double>(ys[i]) * score < 1.0) {
                const double y_over_n = static_cast<double>(ys[i]) / n;
                for (std::size_t d = 0; d < arity; ++d) grad[d] -= y_over_n * xs[i][d];
                grad_b -= y_over_n;
            }
        }
        for (std::size_t d = 0; d < arity; ++d) w[d] -= eta * grad[d];
        b -= eta * grad_b;

        double norm_sq = 0.0;
        for (double v : w) norm_sq += v * v;
        if (norm_sq > radius * radius) {
            const double scale = radius / std::sqrt(norm_sq);
            for (double& v : w) v *= scale;
        }
        if (t > tail_start) {
            for (std::size_t d = 0; d < arity; ++d) w_avg[d] += w[d];
            b_avg += b;
            ++tail_count;
        }
    }
    for (std::size_t d = 0; d < arity; ++d) w_avg[d] /= static_cast<double>(tail_count);
    b_avg /= static_cast<double>(tail_count);

    // Masked dimensions stay exactly zero regardless of rounding.
    for (std::size_t d = 0; d < arity; ++d)
        if (!mask[d]) w_avg[d] = 0.0;

    model.weights = w_avg;
    model.bias = b_avg;
    model.objective_final = svm_primal_objective(model.weights, model.bias, xs, ys, cfg.c_param);
    return model;
}

struct Decision {
    int label = +1;
    double score = 0.0;
};

/// score = w . normalize(x) + b; label = sign(score) with score 0 mapping
/// to +1.
inline Decision predict(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw Error(errc::shape_error, "feature arity " + std::to_string(x.size()) + " vs model " +
                                           std::to_string(model.weights.size()));
    const std::vector<double> z = model.normalizer.apply(x);
    double score = model.bias;
    for (std::size_t d = 0; d < z.size(); ++d) score += model.weights[d] * z[d];
    return Decision{score >= 0.0 ? +1 : -1, score};
}

/// Majority vote; ties resolve to the sign of the score sum (zero sum ->
/// +1). Confidence is |score sum| / voter count. Each voter contributes
/// label * |score|, so the label stays authoritative even if a caller
/// hands in magnitude-only scores.
inline Decision vote_fusion(std::span<const Decision> decisions) {
    if (decisions.empty()) throw Error(errc::no_voters, "no decisions to fuse");
    long votes = 0;
    double score_sum = 0.0;
    for (const auto& d : decisions) {
        votes += d.label >= 0 ? 1 : -1;
        score_sum += static_cast<double>(d.label) * std::abs(d.score);
    }
    int label;
    if (votes > 0) label = +1;
    else if (votes < 0) label = -1;
    else label = score_sum >= 0.0 ? +1 : -1;
    return Decision{label, std::abs(score_sum) / static_cast<double>(decisions.size())};
}

namespace detail {

inline std::string join_doubles(std::span<const double> v) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || (end && *end != '\0'))
        throw Error(errc::malformed_header, std::string("bad ") + what + " value \"" + s + "\"");
    return v;
}

} // namespace detail

/// Plain-text model format, value-exact at 17 significant digits:
///   line 1  "texfrac-svm v1"
///   line 2  mask as comma-separated 0/1 flags
///   line 3  normalizer means
///   line 4  normalizer stddevs
///   line 5  weights
///   line 6  bias and C
inline std::string save_svm_model(const SvmModel& m) {
    std::string out = "texfrac-svm v1\n";
    for (std::size_t i = 0; i < m.mask.size(); ++i) {
        if (i) out += ',';
        out += m.mask[i] ? '1' : '0';
    }
    out += '\n';
    out += detail::join_doubles(m.normalizer.mean) + "\n";
    out += detail::join_doubles(m.normalizer.stddev) + "\n";
    out += detail::join_doubles(m.weights) + "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", m.bias, m.c_param);
    out += buf;
    return out;
}

inline SvmModel load_svm_model(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    if (lines.size() < 6) throw Error(errc::malformed_header, "model file has fewer than 6 lines");
    if (lines[0] != "texfrac-svm v1")
        throw Error(errc::unsupported_format, "bad model magic \"" + lines[0] + "\"");

    SvmModel m;
    for (const auto& cell : detail::split_csv_line(lines[1])) {
        if (cell == "1") m.mask.push_back(true);
        else if (cell == "0") m.mask.push_back(false);
        else throw Error(errc::malformed_header, "bad mask flag \"" + cell + "\"");
    }
    auto parse_row = [](const std::string& line, const char* what) {
        std::vector<double> v;
        for (const auto& cell : detail::split_csv_line(line))
            v.push_back(detail::parse_double(cell, what));
        return v;
    };
    m.normalizer.mean = parse_row(lines[2], "mean");
    m.normalizer.stddev = parse_row(lines[3], "stddev");
    m.weights = parse_row(lines[4], "weight");
    const auto tail = parse_row(lines[5], "bias/C");
    if (tail.size() != 2) throw Error(errc::malformed_header, "line 6 must hold bias and C");
    m.bias = tail[0];
    m.c_param = tail[1];

    const std::size_t arity = m.weights.size();
    if (m.mask.size() != arity || m.normalizer.mean.size() != arity ||
        m.normalizer.stddev.size() != arity)
        throw Error(errc::shape_error, "model line arities disagree");
    return m;
}

} // namespace texfrac
