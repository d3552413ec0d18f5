// SPDX-License-Identifier: Apache-2.0

#include "chicrit/error.hpp"

namespace chicrit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "E_IO";
        case ErrorCode::Usage: return "E_USAGE";
        case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
        case ErrorCode::DegenerateSample: return "E_DEGENERATE_SAMPLE";
        case ErrorCode::TooFewSamples: return "E_TOO_FEW_SAMPLES";
        case ErrorCode::LengthMismatch: return "E_LENGTH_MISMATCH";
        case ErrorCode::EmptyAfterDeletion: return "E_EMPTY_AFTER_DELETION";
        case ErrorCode::EmptyHistogram: return "E_EMPTY_HISTOGRAM";
        case ErrorCode::ParseError: return "E_PARSE";
        case ErrorCode::DuplicatePixelId: return "E_DUPLICATE_PIXEL_ID";
        case ErrorCode::MissingCoordinates: return "E_MISSING_COORDINATES";
        case ErrorCode::MisalignedTimestamps: return "E_MISALIGNED_TIMESTAMPS";
        case ErrorCode::UnknownPixelId: return "E_UNKNOWN_PIXEL_ID";
        case ErrorCode::NegativeValue: return "E_NEGATIVE_VALUE";
        case ErrorCode::EmptyResult: return "E_EMPTY_RESULT";
        case ErrorCode::NotEnoughPixels: return "E_NOT_ENOUGH_PIXELS";
        case ErrorCode::AllPairsSkipped: return "E_ALL_PAIRS_SKIPPED";
        case ErrorCode::FitDiverged: return "E_FIT_DIVERGED";
        case ErrorCode::DegenerateCurve: return "E_DEGENERATE_CURVE";
        case ErrorCode::UnconvergedFit: return "E_UNCONVERGED_FIT";
        case ErrorCode::SeriesTooShort: return "E_SERIES_TOO_SHORT";
        case ErrorCode::NoMinimum: return "E_NO_MINIMUM";
        case ErrorCode::CurveTooShort: return "E_CURVE_TOO_SHORT";
        case ErrorCode::NoPixelConverged: return "E_NO_PIXEL_CONVERGED";
        case ErrorCode::NonPositiveInput: return "E_NON_POSITIVE_INPUT";
        case ErrorCode::ZeroMeasurementMean: return "E_ZERO_MEASUREMENT_MEAN";
        case ErrorCode::MissingComponent: return "E_MISSING_COMPONENT";
        case ErrorCode::NoOverlap: return "E_NO_OVERLAP";
        case ErrorCode::InvalidRho: return "E_INVALID_RHO";
        case ErrorCode::CovarianceNotPD: return "E_COVARIANCE_NOT_PD";
    }
    return "E_UNKNOWN";
}

}  // namespace chicrit
