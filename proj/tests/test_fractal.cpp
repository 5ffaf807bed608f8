#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "texfrac/fractal.hpp"
#include "texfrac/synth.hpp"

using namespace texfrac;
using testutil::error_code_of;
using testutil::make_binary;

namespace {

// Brute-force oracle: check every cell of the grid by direct pixel scan.
std::uint64_t naive_box_count(const BinaryImage& img, std::size_t box) {
    std::uint64_t n = 0;
    for (std::size_t cy = 0; cy * box < img.height; ++cy) {
        for (std::size_t cx = 0; cx * box < img.width; ++cx) {
            bool occupied = false;
            for (std::size_t y = cy * box; y < std::min((cy + 1) * box, img.height) && !occupied; ++y)
                for (std::size_t x = cx * box; x < std::min((cx + 1) * box, img.width); ++x)
                    if (img.at(x, y)) {
                        occupied = true;
                        break;
                    }
            if (occupied) ++n;
        }
    }
    return n;
}

// Plain-sums regression, algebraically distinct from the library's
// centered form.
double naive_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BinaryImage upscale2x(const BinaryImage& img) {
    BinaryImage out;
    out.width = img.width * 2;
    out.height = img.height * 2;
    out.bits.resize(out.width * out.height);
    for (std::size_t y = 0; y < out.height; ++y)
        for (std::size_t x = 0; x < out.width; ++x) out.at(x, y) = img.at(x / 2, y / 2);
    return out;
}

BinaryImage rotate90(const BinaryImage& img) {
    BinaryImage out;
    out.width = img.height;
    out.height = img.width;
    out.bits.resize(img.bits.size());
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x) out.at(img.height - 1 - y, x) = img.at(x, y);
    return out;
}

BinaryImage sierpinski_bits(int depth, std::size_t size) {
    return as_binary(generate(TextureSpec{TextureKind::sierpinski, size, depth, 2, 0.5, 0, 0}));
}

} // namespace

TEST_CASE("box_count on basic patterns") {
    SECTION("all ones: every cell occupied") {
        const auto img = make_binary(8, 8, std::vector<std::uint8_t>(64, 1));
        CHECK(box_count(img, 2) == 16);
        CHECK(box_count(img, 8) == 1);
    }
    SECTION("all zeros: no cell occupied") {
        const auto img = make_binary(8, 8, std::vector<std::uint8_t>(64, 0));
        CHECK(box_count(img, 1) == 0);
        CHECK(box_count(img, 3) == 0);
    }
    SECTION("single set pixel occupies one cell") {
        auto img = make_binary(8, 8, std::vector<std::uint8_t>(64, 0));
        img.at(5, 5) = 1;
        CHECK(box_count(img, 4) == 1);
    }
    SECTION("depth-3 Sierpinski on 8x8 at box 4 has 3 occupied cells") {
        const auto img = sierpinski_bits(3, 8);
        CHECK(box_count(img, 4) == 3);
        CHECK(box_count(img, 4) == naive_box_count(img, 4));
    }
    SECTION("ragged grids match the brute-force scan") {
        SplitMix64 rng(11);
        for (int trial = 0; trial < 25; ++trial) {
            const auto img = testutil::random_binary(rng, 5 + rng.below(9), 5 + rng.below(9), 0.3);
            for (std::size_t box : {1, 2, 3, 4, 5})
                CHECK(box_count(img, box) == naive_box_count(img, box));
        }
    }
}

TEST_CASE("box_count basic laws") {
    SplitMix64 rng(12);
    const auto img = testutil::random_binary(rng, 16, 16, 0.2);
    SECTION("N is monotone non-increasing in box size") {
        std::uint64_t prev = box_count(img, 1);
        for (std::size_t box = 2; box <= 16; ++box) {
            const std::uint64_t cur = box_count(img, box);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
    SECTION("2x nearest-neighbor upscale at doubled box size is invariant") {
        const auto big = upscale2x(img);
        for (std::size_t box : {1, 2, 3, 5}) CHECK(box_count(img, box) == box_count(big, 2 * box));
    }
    SECTION("N at box 1 equals the set-pixel count") {
        CHECK(box_count(img, 1) == img.set_count());
    }
}

TEST_CASE("box_counting_dimension on reference shapes") {
    SECTION("filled square is two-dimensional") {
        const auto img = as_binary(generate(TextureSpec{TextureKind::filled_rect, 256}));
        const auto est = box_counting_dimension(img);
        CHECK(est.dimension >= 1.95);
        CHECK(est.dimension <= 2.00);
        CHECK(est.r_squared > 0.999);
    }
    SECTION("horizontal line is one-dimensional") {
        const auto img = as_binary(generate(TextureSpec{TextureKind::hline, 256}));
        const auto est = box_counting_dimension(img);
        CHECK(est.dimension >= 0.95);
        CHECK(est.dimension <= 1.05);
    }
    SECTION("Sierpinski depth 8 approaches log3/log2") {
        const auto est = box_counting_dimension(sierpinski_bits(8, 256));
        CHECK_THAT(est.dimension, Catch::Matchers::WithinAbs(1.585, 0.05));
    }
    SECTION("empty support is rejected") {
        const auto img = make_binary(8, 8, std::vector<std::uint8_t>(64, 0));
        CHECK(error_code_of([&] { box_counting_dimension(img); }) == errc::empty_support);
    }
    SECTION("fewer than two distinct sizes is rejected") {
        const auto img = make_binary(8, 8, std::vector<std::uint8_t>(64, 1));
        CHECK(error_code_of([&] { box_counting_dimension(img, {2, 2}); }) ==
              errc::invalid_argument);
    }
}

TEST_CASE("box_counting_dimension estimates stay in the plane") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto img = testutil::random_binary(rng, 32, 32, 0.05 + 0.9 * rng.uniform01());
        if (img.set_count() == 0) continue;
        const auto est = box_counting_dimension(img);
        CHECK(est.dimension >= -0.1);
        CHECK(est.dimension <= 2.1);
        // The stored points must reproduce the slope independently.
        CHECK_THAT(naive_slope(est.points), Catch::Matchers::WithinAbs(est.dimension, 1e-9));
    }
}

TEST_CASE("rotation by 90 degrees preserves the dimension of square images") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto img = testutil::random_binary(rng, 32, 32, 0.3);
        if (img.set_count() == 0) continue;
        const auto a = box_counting_dimension(img);
        const auto b = box_counting_dimension(rotate90(img));
        CHECK(a.dimension == b.dimension);
    }
}

TEST_CASE("fractal estimate CSV dump") {
    const auto est = box_counting_dimension(sierpinski_bits(3, 8), {1, 2, 4});
    const auto csv = fractal_estimate_csv(est);
    CHECK(csv.find("lambda,count\n") == 0);
    CHECK(csv.find("1,27\n") != std::string::npos);
    CHECK(csv.find("4,3\n") != std::string::npos);
    CHECK(csv.find("dimension,r2\n") != std::string::npos);
}

namespace {

// Direct clamped-window measure, the oracle for the sliding-sum path.
double naive_window_sum(const GrayImage& img, std::size_t px, std::size_t py, std::size_t win) {
    const long r = static_cast<long>((win - 1) / 2);
    double sum = 0.0;
    for (long dy = -r; dy <= r; ++dy) {
        for (long dx = -r; dx <= r; ++dx) {
            long x = static_cast<long>(px) + dx;
            long y = static_cast<long>(py) + dy;
            x = std::clamp(x, 0L, static_cast<long>(img.width) - 1);
            y = std::clamp(y, 0L, static_cast<long>(img.height) - 1);
            sum += img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        }
    }
    return sum;
}

double naive_alpha(const GrayImage& img, std::size_t px, std::size_t py,
                   const std::vector<std::size_t>& wins) {
    double total = 0.0;
    for (auto p : img.pixels) total += p;
    std::vector<std::pair<double, double>> pts;
    const double longest = static_cast<double>(std::max(img.width, img.height));
    for (std::size_t w : wins) {
        const double mu = naive_window_sum(img, px, py, w) / total;
        if (mu > 0.0)
            pts.emplace_back(std::log(static_cast<double>(w) / longest), std::log(mu));
    }
    return naive_slope(pts);
}

} // namespace

TEST_CASE("holder_image computes local scaling exponents") {
    SECTION("constant image scales like the plane everywhere") {
        const auto img = testutil::make_gray(32, 32, 256, std::vector<std::uint8_t>(1024, 7));
        const auto h = holder_image(img, {3, 5, 7});
        for (double a : h.alpha) CHECK_THAT(a, Catch::Matchers::WithinAbs(2.0, 0.1));
    }
    SECTION("matches the brute-force window oracle on random images") {
        SplitMix64 rng(15);
        const auto img = testutil::random_gray(rng, 11, 7, 16);
        const std::vector<std::size_t> wins{3, 5, 7};
        const auto h = holder_image(img, wins);
        for (std::size_t y = 0; y < img.height; y += 2)
            for (std::size_t x = 0; x < img.width; x += 3)
                CHECK_THAT(h.at(x, y),
                           Catch::Matchers::WithinAbs(naive_alpha(img, x, y, wins), 1e-9));
    }
    SECTION("a lone point mass has exponent 0 at its pixel") {
        auto img = testutil::make_gray(16, 16, 256, std::vector<std::uint8_t>(256, 0));
        img.at(8, 8) = 200;
        const auto h = holder_image(img, {3, 5});
        CHECK_THAT(h.at(8, 8), Catch::Matchers::WithinAbs(0.0, 1e-12));
        // Far corners see no mass at any scale: sentinel exponents.
        CHECK(std::isinf(h.at(0, 0)));
    }
    SECTION("zero image is rejected") {
        const auto img = testutil::make_gray(8, 8, 256, std::vector<std::uint8_t>(64, 0));
        CHECK(error_code_of([&] { holder_image(img, {3, 5}); }) == errc::zero_measure);
    }
    SECTION("window sizes must be odd, ascending, and at least two") {
        const auto img = testutil::make_gray(8, 8, 256, std::vector<std::uint8_t>(64, 1));
        CHECK(error_code_of([&] { holder_image(img, {3}); }) == errc::invalid_argument);
        CHECK(error_code_of([&] { holder_image(img, {3, 4}); }) == errc::invalid_argument);
        CHECK(error_code_of([&] { holder_image(img, {5, 3}); }) == errc::invalid_argument);
    }
}

TEST_CASE("multifractal_spectrum bins level sets by exponent") {
    const std::vector<std::size_t> sizes{1, 2, 4, 8, 16, 32};
    SECTION("constant image collapses to one full-support bin") {
        const auto img = testutil::make_gray(64, 64, 256, std::vector<std::uint8_t>(4096, 9));
        const auto spec = multifractal_spectrum(holder_image(img, {3, 5, 7, 9}), 10, sizes);
        REQUIRE(spec.bins.size() == 1);
        CHECK_THAT(spec.bins[0].f_alpha, Catch::Matchers::WithinAbs(2.0, 0.05));
        CHECK(spec.bins[0].pixels == 4096);
    }
    SECTION("two spatial halves give two plane-dimensional bins") {
        HolderImage h;
        h.width = 64;
        h.height = 64;
        h.alpha.resize(4096);
        for (std::size_t y = 0; y < 64; ++y)
            for (std::size_t x = 0; x < 64; ++x) h.alpha[y * 64 + x] = x < 32 ? 1.0 : 3.0;
        const auto spec = multifractal_spectrum(h, 2, sizes);
        REQUIRE(spec.bins.size() == 2);
        // Oracle: the level sets are explicit half-plane rectangles.
        BinaryImage half;
        half.width = 64;
        half.height = 64;
        half.bits.assign(4096, 0);
        for (std::size_t y = 0; y < 64; ++y)
            for (std::size_t x = 0; x < 32; ++x) half.bits[y * 64 + x] = 1;
        const double expected = box_counting_dimension(half, sizes).dimension;
        CHECK_THAT(spec.bins[0].f_alpha, Catch::Matchers::WithinAbs(expected, 1e-12));
        CHECK_THAT(spec.bins[0].f_alpha, Catch::Matchers::WithinAbs(2.0, 0.1));
        CHECK_THAT(spec.bins[1].f_alpha, Catch::Matchers::WithinAbs(2.0, 0.1));
        CHECK(spec.bins[0].alpha_center < spec.bins[1].alpha_center);
    }
    SECTION("n_bins = 1 degenerates to the full-support dimension") {
        SplitMix64 rng(16);
        const auto img = testutil::random_gray(rng, 32, 32, 64);
        const auto h = holder_image(img, {3, 5, 7});
        const auto spec = multifractal_spectrum(h, 1, sizes);
        REQUIRE(spec.bins.size() == 1);
        BinaryImage support;
        support.width = h.width;
        support.height = h.height;
        support.bits.assign(h.alpha.size(), 0);
        for (std::size_t i = 0; i < h.alpha.size(); ++i)
            support.bits[i] = std::isfinite(h.alpha[i]) ? 1 : 0;
        CHECK_THAT(spec.bins[0].f_alpha,
                   Catch::Matchers::WithinAbs(box_counting_dimension(support, sizes).dimension,
                                              1e-12));
    }
    SECTION("bins partition the finite-exponent pixels") {
        SplitMix64 rng(17);
        const auto img = testutil::random_gray(rng, 24, 24, 32);
        const auto h = holder_image(img, {3, 5, 7});
        const auto spec = multifractal_spectrum(h, 6, {1, 2, 4, 8});
        std::size_t total = spec.excluded_pixels;
        double support_dim =
            box_counting_dimension(threshold_binarize(img, 0), {1, 2, 4, 8}).dimension;
        double prev_center = -1e300;
        for (const auto& b : spec.bins) {
            total += b.pixels;
            CHECK(b.alpha_center > prev_center);
            prev_center = b.alpha_center;
            CHECK(b.f_alpha <= support_dim + 0.1);
            CHECK(b.f_alpha <= 2.0 + 0.1);
        }
        CHECK(total == h.alpha.size());
    }
}

TEST_CASE("spectrum_summary reduces bins to a fixed descriptor") {
    double peak, fmax, width;
    SECTION("singleton") {
        MultifractalSpectrum s;
        s.bin_width = 1.0;
        s.bins = {{2.0, 2.0, 10}};
        spectrum_summary(s, peak, fmax, width);
        CHECK(peak == 2.0);
        CHECK(fmax == 2.0);
        CHECK(width == 0.0);
    }
    SECTION("argmax by inspection") {
        MultifractalSpectrum s;
        s.bin_width = 0.5;
        s.bins = {{1.5, 1.0, 5}, {2.0, 1.8, 5}, {2.5, 1.2, 5}};
        spectrum_summary(s, peak, fmax, width);
        CHECK(peak == 2.0);
        CHECK(fmax == 1.8);
        CHECK(width == 1.0);
    }
    SECTION("ties resolve to the smaller alpha") {
        MultifractalSpectrum s;
        s.bin_width = 0.5;
        s.bins = {{1.0, 1.5, 5}, {2.0, 1.5, 5}};
        spectrum_summary(s, peak, fmax, width);
        CHECK(peak == 1.0);
    }
}
