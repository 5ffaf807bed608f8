#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "texfrac/classify.hpp"
#include "texfrac/error.hpp"
#include "texfrac/rng.hpp"

namespace texfrac {

/// 2x2 diagnostic counts: Normal (+1) is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
};

/// Percentages in [0,100]; a metric whose denominator is zero is left
/// unset rather than reported as NaN.
struct Metrics {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> ccr;
};

inline ConfusionMatrix confusion(std::span<const int> true_labels, std::span<const int> predicted) {
    if (true_labels.size() != predicted.size())
        throw Error(errc::shape_error, std::to_string(true_labels.size()) + " truths vs " +
                                           std::to_string(predicted.size()) + " predictions");
    if (true_labels.empty()) throw Error(errc::invalid_argument, "need at least one pair");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        if ((true_labels[i] != 1 && true_labels[i] != -1) ||
            (predicted[i] != 1 && predicted[i] != -1))
            throw Error(errc::invalid_argument, "labels must be +1 or -1");
        if (true_labels[i] == 1)
            predicted[i] == 1 ? ++cm.tp : ++cm.fn;
        else
            predicted[i] == 1 ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

/// sensitivity = 100 TP/(TP+FN); specificity = 100 TN/(TN+FP);
/// ccr = 100 (TP+TN)/T. With paper_eq2 the specificity denominator is
/// TN+FN instead, a nonstandard variant kept for side-by-side reporting.
inline Metrics metrics(const ConfusionMatrix& cm, bool paper_eq2 = false) {
    const double t = static_cast<double>(cm.total());
    if (cm.total() == 0) throw Error(errc::empty_matrix, "all counts are zero");
    Metrics m;
    if (cm.tp + cm.fn > 0)
        m.sensitivity = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    const std::uint64_t spec_den = paper_eq2 ? cm.tn + cm.fn : cm.tn + cm.fp;
    if (spec_den > 0)
        m.specificity = 100.0 * static_cast<double>(cm.tn) / static_cast<double>(spec_den);
    m.ccr = 100.0 * static_cast<double>(cm.tp + cm.tn) / t;
    return m;
}

/// Stratified deterministic split: each class is permuted by a
/// splitmix64-driven Fisher-Yates shuffle (positive class first, then
/// negative, from one stream seeded by `seed`) and cut at the given
/// fraction, rounded to nearest with at least one sample per side.
inline std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split(
    std::span<const LabeledSample> samples, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(errc::invalid_argument, "train_fraction must be in (0,1)");

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].label == +1) pos_idx.push_back(i);
        else if (samples[i].label == -1) neg_idx.push_back(i);
        else throw Error(errc::invalid_argument, "labels must be +1 or -1");
    }
    if (pos_idx.size() < 2 || neg_idx.size() < 2)
        throw Error(errc::too_few_samples, "each class needs >= 2 samples");

    SplitMix64 rng(seed);
    std::vector<LabeledSample> train, test;
    for (const auto* cls : {&pos_idx, &neg_idx}) {
        const std::size_t n = cls->size();
        const auto perm = shuffled_indices(n, rng);
        std::size_t n_train =
            static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
        if (n_train < 1) n_train = 1;
        if (n_train > n - 1) n_train = n - 1;
        for (std::size_t k = 0; k < n; ++k) {
            const LabeledSample& s = samples[(*cls)[perm[k]]];
            (k < n_train ? train : test).push_back(s);
        }
    }
    return {std::move(train), std::move(test)};
}

} // namespace texfrac
