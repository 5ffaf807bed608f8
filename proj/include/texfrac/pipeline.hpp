#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "texfrac/classify.hpp"
#include "texfrac/error.hpp"
#include "texfrac/evaluate.hpp"
#include "texfrac/fractal.hpp"
#include "texfrac/glcm.hpp"
#include "texfrac/image.hpp"
#include "texfrac/pgm.hpp"
#include "texfrac/synth.hpp"

namespace texfrac {

enum class FusionMode { early, vote };

/// Central knob set for the extract/train/evaluate pipeline. Every output
/// file echoes these values as comment lines, so a result names the
/// configuration that produced it.
struct RunConfig {
    int glcm_distance = 2;
    std::size_t glcm_levels = 8;
    std::vector<std::size_t> box_sizes;                     // empty: powers of two per image
    std::vector<std::size_t> holder_windows = {3, 5, 7, 9};
    std::size_t spectrum_bins = 10;
    double svm_c = 1.0;
    FusionMode fusion_mode = FusionMode::early;
    FeatureFamily feature_mask = FeatureFamily::combined;
    std::uint64_t seed = 42;
    double split_fraction = 0.5;
    bool paper_eq2 = false;
    std::string loglog_dump; // directory for per-image log-log CSVs; empty disables
};

inline const char* fusion_mode_name(FusionMode m) {
    return m == FusionMode::early ? "early" : "vote";
}

inline const char* feature_family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::fractal:  return "fractal";
        case FeatureFamily::glcm:     return "glcm";
        case FeatureFamily::combined: return "combined";
    }
    return "?";
}

namespace detail {

inline std::string join_sizes(const std::vector<std::size_t>& v) {
    if (v.empty()) return "auto";
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// The comment block prefixed to every pipeline output file.
inline std::string config_header(const RunConfig& cfg) {
    std::string h;
    h += "# glcm-distance=" + std::to_string(cfg.glcm_distance) + "\n";
    h += "# glcm-levels=" + std::to_string(cfg.glcm_levels) + "\n";
    h += "# box-sizes=" + detail::join_sizes(cfg.box_sizes) + "\n";
    h += "# holder-windows=" + detail::join_sizes(cfg.holder_windows) + "\n";
    h += "# spectrum-bins=" + std::to_string(cfg.spectrum_bins) + "\n";
    h += "# svm-c=" + detail::fmt17(cfg.svm_c) + "\n";
    h += "# fusion-mode=" + std::string(fusion_mode_name(cfg.fusion_mode)) + "\n";
    h += "# feature-mask=" + std::string(feature_family_name(cfg.feature_mask)) + "\n";
    h += "# seed=" + std::to_string(cfg.seed) + "\n";
    h += "# split-fraction=" + detail::fmt17(cfg.split_fraction) + "\n";
    return h;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_error, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file_bytes(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(errc::io_error, "short write to " + path);
}

inline void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(content.data()),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(errc::io_error, "short write to " + path);
}

/// One image's extraction products. The raw fractal fit is kept for
/// log-log dumps; correlation_defined records whether the GLCM
/// correlation existed before the undefined->0 mapping.
struct Extraction {
    FeatureVector features;
    bool correlation_defined = true;
    FractalEstimate fractal;
};

/// The per-image pipeline: Otsu-binarize for the box-counting dimension,
/// Hoelder-transform the grayscale for the spectrum, and average the four
/// directional GLCM feature sets.
inline Extraction extract_features(const GrayImage& img, const RunConfig& cfg) {
    Extraction ex;
    const BinaryImage support = threshold_binarize(img);
    const std::vector<std::size_t> sizes =
        cfg.box_sizes.empty() ? default_box_sizes(img.width, img.height) : cfg.box_sizes;
    ex.fractal = box_counting_dimension(support, sizes);

    const HolderImage holder = holder_image(img, cfg.holder_windows);
    const MultifractalSpectrum spectrum = multifractal_spectrum(holder, cfg.spectrum_bins, sizes);

    const GlcmFeatures glcm = averaged_features(img, cfg.glcm_distance, cfg.glcm_levels);
    ex.correlation_defined = glcm.correlation.has_value();
    ex.features = fuse_features(ex.fractal, spectrum, glcm);
    return ex;
}

inline constexpr const char* kFeatureCsvColumns =
    "path,label,fractal_dim,alpha_peak,f_max,spectrum_width,contrast,correlation,energy,homogeneity";

struct FeatureRow {
    std::string path;
    int label = +1;
    FeatureVector features;
    bool correlation_defined = true;
};

inline std::string feature_row_csv(const FeatureRow& row) {
    const auto a = row.features.as_array();
    std::string out = row.path + "," + std::to_string(row.label);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += ',';
        if (i == kCorrelationSlot && !row.correlation_defined) continue; // empty cell
        out += detail::fmt17(a[i]);
    }
    return out;
}

struct ManifestEntry {
    std::string path; // resolved
    int label = +1;
};

/// Reads "path,label[,...]" rows; relative paths resolve against the
/// manifest's own directory. '#' lines and a leading header row are
/// skipped.
inline std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(errc::io_error, "cannot open " + manifest_path);
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = texfrac::detail::split_csv_line(line);
        if (cells.size() < 2) throw Error(errc::malformed_header, "manifest row needs path,label");
        if (cells[0] == "path") continue; // header row
        ManifestEntry e;
        std::filesystem::path p(cells[0]);
        e.path = p.is_absolute() ? p.string() : (base / p).string();
        if (cells[1] == "1" || cells[1] == "+1") e.label = +1;
        else if (cells[1] == "-1" || cells[1] == "0") e.label = -1;
        else throw Error(errc::malformed_header, "bad label \"" + cells[1] + "\" in manifest");
        entries.push_back(e);
    }
    return entries;
}

struct ExtractResult {
    std::size_t written = 0;
    std::vector<std::string> failures; // "path: message" per failed file
};

/// Extracts features for every manifest entry into a CSV, one row per
/// image in manifest order. Per-file failures are collected, not fatal;
/// callers decide the exit status.
inline ExtractResult cmd_extract(const std::string& manifest_path, const std::string& out_csv,
                                 const RunConfig& cfg) {
    const auto entries = read_manifest(manifest_path);
    ExtractResult result;
    std::string out = "# texfrac features v1\n" + config_header(cfg);
    out += std::string(kFeatureCsvColumns) + "\n";

    for (const auto& e : entries) {
        try {
            const GrayImage img = load_pgm(read_file_bytes(e.path));
            const Extraction ex = extract_features(img, cfg);
            FeatureRow row{std::filesystem::path(e.path).filename().string(), e.label, ex.features,
                           ex.correlation_defined};
            out += feature_row_csv(row) + "\n";
            ++result.written;
            if (!cfg.loglog_dump.empty()) {
                std::filesystem::create_directories(cfg.loglog_dump);
                const std::string stem = std::filesystem::path(e.path).stem().string();
                write_file_bytes((std::filesystem::path(cfg.loglog_dump) / (stem + ".loglog.csv")).string(),
                                 fractal_estimate_csv(ex.fractal));
            }
        } catch (const Error& err) {
            result.failures.push_back(e.path + ": " + err.what());
        }
    }
    write_file_bytes(out_csv, out);
    return result;
}

/// Parses a features CSV back into labeled samples. An empty correlation
/// cell is the undefined marker and reads as 0.
inline std::vector<FeatureRow> read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io_error, "cannot open " + path);
    std::vector<FeatureRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = texfrac::detail::split_csv_line(line);
        if (!cells.empty() && cells[0] == "path") continue;
        if (cells.size() != 2 + kFeatureArity)
            throw Error(errc::shape_error, "feature row has " + std::to_string(cells.size()) +
                                               " cells, want " + std::to_string(2 + kFeatureArity));
        FeatureRow row;
        row.path = cells[0];
        if (cells[1] == "1" || cells[1] == "+1") row.label = +1;
        else if (cells[1] == "-1" || cells[1] == "0") row.label = -1;
        else throw Error(errc::malformed_header, "bad label \"" + cells[1] + "\"");
        std::array<double, kFeatureArity> vals{};
        for (std::size_t i = 0; i < kFeatureArity; ++i) {
            const std::string& cell = cells[2 + i];
            if (cell.empty()) {
                if (i != kCorrelationSlot)
                    throw Error(errc::malformed_header, "empty cell outside correlation column");
                vals[i] = 0.0;
                row.correlation_defined = false;
            } else {
                vals[i] = texfrac::detail::parse_double(cell, "feature");
            }
        }
        row.features = FeatureVector{vals[0], vals[1], vals[2], vals[3],
                                     vals[4], vals[5], vals[6], vals[7]};
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<LabeledSample> to_samples(const std::vector<FeatureRow>& rows) {
    std::vector<LabeledSample> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(LabeledSample{r.features.as_vector(), r.label});
    return out;
}

inline SvmModel train_family(std::span<const LabeledSample> samples, FeatureFamily family,
                             double c_param) {
    SvmTrainConfig tc;
    tc.c_param = c_param;
    tc.mask = family_mask(family);
    tc.zero_as_missing = {kCorrelationSlot};
    return fit_linear_svm(samples, tc);
}

/// Trains per the config and writes model file(s): one for early fusion,
/// one per feature family for vote fusion. Returns the written paths.
inline std::vector<std::string> cmd_train(const std::string& features_csv,
                                          const std::string& model_out, const RunConfig& cfg) {
    const auto samples = to_samples(read_features_csv(features_csv));
    std::vector<std::string> written;
    if (cfg.fusion_mode == FusionMode::early) {
        const SvmModel model = train_family(samples, cfg.feature_mask, cfg.svm_c);
        write_file_bytes(model_out, save_svm_model(model));
        written.push_back(model_out);
    } else {
        const std::filesystem::path p(model_out);
        const std::string ext = p.extension().string();
        const std::string stem = (p.parent_path() / p.stem()).string();
        for (FeatureFamily fam : {FeatureFamily::fractal, FeatureFamily::glcm}) {
            const SvmModel model = train_family(samples, fam, cfg.svm_c);
            const std::string path = stem + "." + feature_family_name(fam) + ext;
            write_file_bytes(path, save_svm_model(model));
            written.push_back(path);
        }
    }
    return written;
}

/// Applies one or more models to a features CSV. Multiple models are
/// combined by vote fusion. Output rows: path,label,predicted,score.
inline void cmd_predict(const std::vector<std::string>& model_paths, const std::string& features_csv,
                        const std::string& out_csv, const RunConfig& cfg) {
    if (model_paths.empty()) throw Error(errc::invalid_argument, "need at least one model");
    std::vector<SvmModel> models;
    for (const auto& mp : model_paths) {
        const auto bytes = read_file_bytes(mp);
        models.push_back(load_svm_model(std::string(bytes.begin(), bytes.end())));
    }
    const auto rows = read_features_csv(features_csv);
    std::string out = "# texfrac predictions v1\n" + config_header(cfg);
    out += "path,label,predicted,score\n";
    for (const auto& row : rows) {
        const auto x = row.features.as_vector();
        std::vector<Decision> decisions;
        decisions.reserve(models.size());
        for (const auto& m : models) decisions.push_back(predict(m, x));
        const Decision d = models.size() == 1 ? decisions[0] : vote_fusion(decisions);
        out += row.path + "," + std::to_string(row.label) + "," + std::to_string(d.label) + "," +
               detail::fmt17(d.score) + "\n";
    }
    write_file_bytes(out_csv, out);
}

struct AblationResult {
    std::string method;
    ConfusionMatrix cm;
    Metrics test_metrics;
};

/// Splits, trains, and scores one ablation on the held-out side.
/// "combined" obeys the fusion mode: a single 8-slot model for early
/// fusion, a fractal+glcm model pair fused by vote otherwise.
inline AblationResult run_ablation(std::span<const LabeledSample> train,
                                   std::span<const LabeledSample> test, FeatureFamily family,
                                   const RunConfig& cfg) {
    AblationResult res;
    res.method = feature_family_name(family);
    std::vector<int> truth, pred;
    if (family == FeatureFamily::combined && cfg.fusion_mode == FusionMode::vote) {
        const SvmModel mf = train_family(train, FeatureFamily::fractal, cfg.svm_c);
        const SvmModel mg = train_family(train, FeatureFamily::glcm, cfg.svm_c);
        for (const auto& s : test) {
            const Decision d = vote_fusion(std::vector<Decision>{predict(mf, s.features),
                                                                 predict(mg, s.features)});
            truth.push_back(s.label);
            pred.push_back(d.label);
        }
    } else {
        const SvmModel m = train_family(train, family, cfg.svm_c);
        for (const auto& s : test) {
            truth.push_back(s.label);
            pred.push_back(predict(m, s.features).label);
        }
    }
    res.cm = confusion(truth, pred);
    res.test_metrics = metrics(res.cm);
    return res;
}

/// Row-percent confusion layout, one block per method:
/// each true-class row shows the percentage predicted into each class.
inline void print_confusion_report(std::ostream& os, const AblationResult& r) {
    const double pos = static_cast<double>(r.cm.tp + r.cm.fn);
    const double neg = static_cast<double>(r.cm.fp + r.cm.tn);
    char buf[256];
    os << "[" << r.method << "] confusion (row %):\n";
    os << "                    Normal(1)  Abnormal(0)\n";
    std::snprintf(buf, sizeof(buf), "    Normal(1)    %8.2f%%    %8.2f%%\n",
                  pos > 0 ? 100.0 * static_cast<double>(r.cm.tp) / pos : 0.0,
                  pos > 0 ? 100.0 * static_cast<double>(r.cm.fn) / pos : 0.0);
    os << buf;
    std::snprintf(buf, sizeof(buf), "    Abnormal(0)  %8.2f%%    %8.2f%%\n",
                  neg > 0 ? 100.0 * static_cast<double>(r.cm.fp) / neg : 0.0,
                  neg > 0 ? 100.0 * static_cast<double>(r.cm.tn) / neg : 0.0);
    os << buf;
    os << "    counts: tp=" << r.cm.tp << " fn=" << r.cm.fn << " fp=" << r.cm.fp
       << " tn=" << r.cm.tn << "\n";
}

inline std::string metrics_csv_cell(const std::optional<double>& v) {
    return v ? detail::fmt17(*v) : std::string();
}

/// Full evaluation: deterministic stratified split, then one metrics row
/// per feature family. Confusion tables go to `report`; the CSV goes to
/// metrics_out.
inline std::vector<AblationResult> cmd_evaluate(const std::string& features_csv,
                                                const std::string& metrics_out, const RunConfig& cfg,
                                                std::ostream& report) {
    const auto samples = to_samples(read_features_csv(features_csv));
    const auto [train, test] = split(samples, cfg.split_fraction, cfg.seed);

    std::vector<AblationResult> results;
    for (FeatureFamily fam : {FeatureFamily::fractal, FeatureFamily::glcm, FeatureFamily::combined})
        results.push_back(run_ablation(train, test, fam, cfg));

    std::string out = "# texfrac metrics v1\n" + config_header(cfg);
    out += "method,sensitivity,specificity,ccr";
    if (cfg.paper_eq2) out += ",specificity_eq2";
    out += "\n";
    for (const auto& r : results) {
        out += r.method + "," + metrics_csv_cell(r.test_metrics.sensitivity) + "," +
               metrics_csv_cell(r.test_metrics.specificity) + "," + metrics_csv_cell(r.test_metrics.ccr);
        if (cfg.paper_eq2) out += "," + metrics_csv_cell(metrics(r.cm, true).specificity);
        out += "\n";
        print_confusion_report(report, r);
    }
    write_file_bytes(metrics_out, out);
    return results;
}

/// Fixture templates for the built-in two-class synthetic dataset: the
/// classes differ in midpoint-displacement roughness (a fractal-channel
/// signal) and in stripe-overlay contrast (a GLCM-channel signal).
struct SynthConfig {
    std::size_t n_per_class = 20;
    std::size_t size = 128;
    std::uint64_t seed = 42;
    TextureSpec class_a{TextureKind::rough_field, 128, 3, 8, 0.75, 0, 0};
    TextureSpec class_b{TextureKind::rough_field, 128, 3, 4, 0.35, 48, 0};
};

/// Writes the dataset as PGM files plus a manifest CSV
/// (path,label,kind,params). Returns the manifest path.
inline std::string cmd_synth(const std::string& out_dir, const SynthConfig& sc) {
    TextureSpec a = sc.class_a;
    TextureSpec b = sc.class_b;
    a.size = b.size = sc.size;
    std::filesystem::create_directories(out_dir);
    const auto dataset = make_dataset(a, b, sc.n_per_class, sc.seed);

    std::string manifest = "# texfrac manifest v1\npath,label,kind,params\n";
    std::size_t idx_a = 0, idx_b = 0;
    for (const auto& d : dataset) {
        char name[64];
        if (d.label == +1)
            std::snprintf(name, sizeof(name), "class_a_%03zu.pgm", idx_a++);
        else
            std::snprintf(name, sizeof(name), "class_b_%03zu.pgm", idx_b++);
        write_file_bytes((std::filesystem::path(out_dir) / name).string(), emit_pgm(d.image));
        manifest += std::string(name) + "," + std::to_string(d.label) + "," +
                    texture_kind_name(d.spec.kind) + "," + texture_params_string(d.spec) + "\n";
    }
    const std::string manifest_path = (std::filesystem::path(out_dir) / "manifest.csv").string();
    write_file_bytes(manifest_path, manifest);
    return manifest_path;
}

} // namespace texfrac
