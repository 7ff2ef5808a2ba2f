#pragma once

#include <stdexcept>
#include <string>

namespace hydroradar {

/// Target range exceeds the unambiguous range implied by the chirp config.
struct RangeAmbiguityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched or degenerate array dimensions (e.g. Doppler FFT on one chirp).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Detector or pipeline configuration that cannot be applied to the data.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Sensor tilt outside the validated +/-30 degree envelope.
struct OutOfToleranceError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Window size incompatible with the run's measurement count.
struct WindowError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Every window of a run came up empty after filtering; no level estimate.
struct NoSignalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Groundtruth series unusable for timestamp alignment.
struct AlignmentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fewer than two scored runs; delta comparison needs a baseline.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter search produced no valid grid cell.
struct TuningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries "<path>:<line>:".
struct ParseError : std::runtime_error {
    ParseError(const std::string& path, long line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    long line_number;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hydroradar
