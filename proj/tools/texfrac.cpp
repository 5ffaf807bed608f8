// texfrac command-line tool: synthesize fixtures, extract fractal+GLCM
// texture features, train linear SVM classifiers, and evaluate them.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "texfrac/texfrac.hpp"

namespace {

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoul(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void add_config_flags(CLI::App* cmd, texfrac::RunConfig& cfg, std::string& box_sizes,
                      std::string& holder_windows, std::string& fusion, std::string& mask) {
    cmd->add_option("--glcm-distance", cfg.glcm_distance, "GLCM offset distance (default 2)");
    cmd->add_option("--glcm-levels", cfg.glcm_levels, "gray levels before GLCM (default 8)");
    cmd->add_option("--box-sizes", box_sizes, "comma-separated box sizes (default: powers of two)");
    cmd->add_option("--holder-windows", holder_windows, "odd window sizes (default 3,5,7,9)");
    cmd->add_option("--spectrum-bins", cfg.spectrum_bins, "alpha bins (default 10)");
    cmd->add_option("--svm-c", cfg.svm_c, "SVM soft-margin C (default 1.0)");
    cmd->add_option("--fusion-mode", fusion, "early|vote (default early)");
    cmd->add_option("--feature-mask", mask, "fractal|glcm|combined (default combined)");
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 42)");
    cmd->add_option("--split-fraction", cfg.split_fraction, "train fraction (default 0.5)");
    cmd->add_flag("--paper-eq2", cfg.paper_eq2,
                  "also report the TN/(TN+FN) specificity variant");
}

void finish_config(texfrac::RunConfig& cfg, const std::string& box_sizes,
                   const std::string& holder_windows, const std::string& fusion,
                   const std::string& mask) {
    if (!box_sizes.empty() && box_sizes != "auto") cfg.box_sizes = parse_size_list(box_sizes);
    if (!holder_windows.empty()) cfg.holder_windows = parse_size_list(holder_windows);
    if (fusion == "vote") cfg.fusion_mode = texfrac::FusionMode::vote;
    else if (fusion == "early" || fusion.empty()) cfg.fusion_mode = texfrac::FusionMode::early;
    else throw texfrac::Error(texfrac::errc::invalid_argument, "bad fusion mode " + fusion);
    if (mask == "fractal") cfg.feature_mask = texfrac::FeatureFamily::fractal;
    else if (mask == "glcm") cfg.feature_mask = texfrac::FeatureFamily::glcm;
    else if (mask == "combined" || mask.empty()) cfg.feature_mask = texfrac::FeatureFamily::combined;
    else throw texfrac::Error(texfrac::errc::invalid_argument, "bad feature mask " + mask);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"texfrac: fractal + GLCM texture feature extraction and SVM classification"};
    app.require_subcommand(1);

    texfrac::RunConfig cfg;
    std::string box_sizes, holder_windows, fusion, mask;

    // synth
    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic texture dataset");
    texfrac::SynthConfig sc;
    std::string synth_out = "fixtures";
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--n-per-class", sc.n_per_class, "images per class (default 20)");
    synth->add_option("--size", sc.size, "image side in pixels, power of two (default 128)");
    synth->add_option("--seed", sc.seed, "dataset seed (default 42)");
    synth->add_option("--class-a-h", sc.class_a.roughness, "class A roughness (default 0.75)");
    synth->add_option("--class-b-h", sc.class_b.roughness, "class B roughness (default 0.35)");
    synth->add_option("--class-a-gain", sc.class_a.contrast_gain, "class A stripe gain (default 0)");
    synth->add_option("--class-b-gain", sc.class_b.contrast_gain, "class B stripe gain (default 48)");
    synth->add_option("--class-a-period", sc.class_a.stripe_period, "class A stripe band width");
    synth->add_option("--class-b-period", sc.class_b.stripe_period, "class B stripe band width");

    // extract
    auto* extract = app.add_subcommand("extract", "extract feature vectors for a manifest of images");
    std::string manifest, features_out = "features.csv";
    extract->add_option("--manifest", manifest, "manifest CSV (path,label,...)")->required();
    extract->add_option("--out", features_out, "output features CSV")->required();
    extract->add_option("--loglog-dump", cfg.loglog_dump,
                        "directory for per-image box-count log-log CSVs");
    add_config_flags(extract, cfg, box_sizes, holder_windows, fusion, mask);

    // train
    auto* train = app.add_subcommand("train", "train SVM model(s) from a features CSV");
    std::string features_in, model_out = "model.svm";
    train->add_option("--features", features_in, "features CSV")->required();
    train->add_option("--out", model_out, "model file (vote mode appends per-family suffixes)")
        ->required();
    add_config_flags(train, cfg, box_sizes, holder_windows, fusion, mask);

    // predict
    auto* predict = app.add_subcommand("predict", "apply model(s) to a features CSV");
    std::vector<std::string> model_paths;
    std::string predictions_out = "predictions.csv";
    predict->add_option("--model", model_paths, "model file (repeat for vote fusion)")->required();
    predict->add_option("--features", features_in, "features CSV")->required();
    predict->add_option("--out", predictions_out, "output predictions CSV")->required();
    add_config_flags(predict, cfg, box_sizes, holder_windows, fusion, mask);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "split, train, and report per-family metrics");
    std::string metrics_out = "metrics.csv";
    evaluate->add_option("--features", features_in, "features CSV")->required();
    evaluate->add_option("--out", metrics_out, "output metrics CSV")->required();
    add_config_flags(evaluate, cfg, box_sizes, holder_windows, fusion, mask);

    CLI11_PARSE(app, argc, argv);

    try {
        finish_config(cfg, box_sizes, holder_windows, fusion, mask);
        if (synth->parsed()) {
            const std::string mpath = texfrac::cmd_synth(synth_out, sc);
            std::cout << "wrote " << mpath << "\n";
        } else if (extract->parsed()) {
            const auto res = texfrac::cmd_extract(manifest, features_out, cfg);
            std::cout << "wrote " << res.written << " rows to " << features_out << "\n";
            if (!res.failures.empty()) {
                for (const auto& f : res.failures) std::cerr << "error: " << f << "\n";
                return 1;
            }
        } else if (train->parsed()) {
            const auto written = texfrac::cmd_train(features_in, model_out, cfg);
            for (const auto& w : written) std::cout << "wrote " << w << "\n";
        } else if (predict->parsed()) {
            texfrac::cmd_predict(model_paths, features_in, predictions_out, cfg);
            std::cout << "wrote " << predictions_out << "\n";
        } else if (evaluate->parsed()) {
            texfrac::cmd_evaluate(features_in, metrics_out, cfg, std::cout);
            std::cout << "wrote " << metrics_out << "\n";
        }
    } catch (const texfrac::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
