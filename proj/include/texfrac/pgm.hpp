#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "texfrac/error.hpp"
#include "texfrac/image.hpp"

namespace texfrac {

namespace detail {

// Skips whitespace and '#' comments (which run to end of line).
// Cursor semantics keep byte offsets available for error messages.
struct PgmCursor {
    const std::vector<std::uint8_t>& data;
    std::size_t pos = 0;

    bool eof() const { return pos >= data.size(); }
    std::uint8_t peek() const { return data[pos]; }

    void skip_separators() {
        while (!eof()) {
            if (std::isspace(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    std::size_t read_uint(const char* what) {
        skip_separators();
        if (eof())
            throw Error(errc::malformed_header,
                        std::string("expected ") + what + " at byte " + std::to_string(pos));
        if (!std::isdigit(peek()))
            throw Error(errc::malformed_header, std::string("expected digit for ") + what +
                                                    " at byte " + std::to_string(pos));
        std::size_t value = 0;
        while (!eof() && std::isdigit(peek())) {
            value = value * 10 + static_cast<std::size_t>(peek() - '0');
            if (value > 1000000)
                throw Error(errc::malformed_header, std::string(what) + " too large at byte " +
                                                        std::to_string(pos));
            ++pos;
        }
        return value;
    }
};

} // namespace detail

/// Parses a PGM file (magic "P2" ASCII or "P5" binary, maxval <= 255).
/// The returned image has levels = maxval + 1 and pixels in file raster
/// order. Parse failures report the offending byte offset.
inline GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
    detail::PgmCursor cur{bytes};
    if (bytes.size() < 2)
        throw Error(errc::malformed_header, "missing magic at byte 0");
    const char m0 = static_cast<char>(bytes[0]);
    const char m1 = static_cast<char>(bytes[1]);
    if (m0 != 'P' || (m1 != '2' && m1 != '5')) {
        throw Error(errc::unsupported_format,
                    std::string("magic \"") + m0 + m1 + "\" at byte 0 (want P2 or P5)");
    }
    const bool binary = m1 == '5';
    cur.pos = 2;

    const std::size_t width = cur.read_uint("width");
    const std::size_t height = cur.read_uint("height");
    const std::size_t maxval = cur.read_uint("maxval");
    if (width < 1 || height < 1)
        throw Error(errc::malformed_header, "zero dimension before byte " + std::to_string(cur.pos));
    if (maxval < 1 || maxval > 255)
        throw Error(errc::maxval_out_of_range,
                    "maxval " + std::to_string(maxval) + " before byte " + std::to_string(cur.pos) +
                        " (supported range 1..255)");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.levels = maxval + 1;
    img.pixels.resize(width * height);

    if (binary) {
        // Exactly one whitespace byte separates the header from the payload.
        if (cur.eof() || !std::isspace(cur.peek()))
            throw Error(errc::malformed_header,
                        "expected single whitespace before raster at byte " + std::to_string(cur.pos));
        ++cur.pos;
        if (bytes.size() - cur.pos < img.pixels.size())
            throw Error(errc::truncated_data,
                        "raster ends at byte " + std::to_string(bytes.size()) + ", need " +
                            std::to_string(cur.pos + img.pixels.size()) + " bytes");
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            const std::uint8_t v = bytes[cur.pos + i];
            if (v > maxval)
                throw Error(errc::invalid_pixel, "pixel value " + std::to_string(v) + " > maxval at byte " +
                                                     std::to_string(cur.pos + i));
            img.pixels[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            cur.skip_separators();
            if (cur.eof())
                throw Error(errc::truncated_data, "raster truncated after " + std::to_string(i) +
                                                      " of " + std::to_string(img.pixels.size()) +
                                                      " samples at byte " + std::to_string(cur.pos));
            const std::size_t v = cur.read_uint("pixel");
            if (v > maxval)
                throw Error(errc::invalid_pixel, "pixel value " + std::to_string(v) +
                                                     " > maxval before byte " + std::to_string(cur.pos));
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

/// Serializes to PGM. P5 payload is width*height raw bytes, row-major,
/// top-left origin; P2 writes one ASCII row per image row.
inline std::vector<std::uint8_t> emit_pgm(const GrayImage& img, bool binary = true) {
    check_image(img);
    std::string out;
    out += binary ? "P5\n" : "P2\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n";
    out += std::to_string(img.levels - 1) + "\n";
    std::vector<std::uint8_t> bytes(out.begin(), out.end());
    if (binary) {
        bytes.insert(bytes.end(), img.pixels.begin(), img.pixels.end());
    } else {
        std::string body;
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                if (x) body += ' ';
                body += std::to_string(img.at(x, y));
            }
            body += '\n';
        }
        bytes.insert(bytes.end(), body.begin(), body.end());
    }
    return bytes;
}

} // namespace texfrac
