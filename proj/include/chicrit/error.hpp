// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chicrit {

/// Failure categories shared by every module. The CLI prints them as
/// `error: <code>: <detail>`.
enum class ErrorCode {
    Io,
    Usage,
    InvalidArgument,
    // infotheory
    DegenerateSample,
    TooFewSamples,
    LengthMismatch,
    EmptyAfterDeletion,
    EmptyHistogram,
    // gridseries
    ParseError,
    DuplicatePixelId,
    MissingCoordinates,
    MisalignedTimestamps,
    UnknownPixelId,
    NegativeValue,
    EmptyResult,
    // spatial
    NotEnoughPixels,
    AllPairsSkipped,
    FitDiverged,
    DegenerateCurve,
    UnconvergedFit,
    // temporal
    SeriesTooShort,
    NoMinimum,
    CurveTooShort,
    NoPixelConverged,
    // criterion
    NonPositiveInput,
    ZeroMeasurementMean,
    MissingComponent,
    NoOverlap,
    // synth
    InvalidRho,
    CovarianceNotPD,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace chicrit
