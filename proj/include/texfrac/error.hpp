#pragma once

#include <stdexcept>
#include <string>

namespace texfrac {

/// Failure categories raised by the library. Each operation documents
/// which codes it can produce.
enum class errc {
    unsupported_format,
    malformed_header,
    maxval_out_of_range,
    truncated_data,
    invalid_pixel,
    invalid_levels,
    invalid_roi,
    invalid_argument,
    empty_support,
    degenerate_regression,
    zero_measure,
    no_valid_pairs,
    not_normalized,
    too_few_samples,
    degenerate_labels,
    shape_error,
    no_voters,
    empty_matrix,
    invalid_spec,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::unsupported_format:    return "UnsupportedFormat";
        case errc::malformed_header:      return "MalformedHeader";
        case errc::maxval_out_of_range:   return "MaxvalOutOfRange";
        case errc::truncated_data:        return "TruncatedData";
        case errc::invalid_pixel:         return "InvalidPixel";
        case errc::invalid_levels:        return "InvalidLevels";
        case errc::invalid_roi:           return "InvalidRoi";
        case errc::invalid_argument:      return "InvalidArgument";
        case errc::empty_support:         return "EmptySupport";
        case errc::degenerate_regression: return "DegenerateRegression";
        case errc::zero_measure:          return "ZeroMeasure";
        case errc::no_valid_pairs:        return "NoValidPairs";
        case errc::not_normalized:        return "NotNormalized";
        case errc::too_few_samples:       return "TooFewSamples";
        case errc::degenerate_labels:     return "DegenerateLabels";
        case errc::shape_error:           return "ShapeError";
        case errc::no_voters:             return "NoVoters";
        case errc::empty_matrix:          return "EmptyMatrix";
        case errc::invalid_spec:          return "InvalidSpec";
        case errc::io_error:              return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace texfrac
