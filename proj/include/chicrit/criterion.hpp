// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chicrit/gridseries.hpp"
#include "chicrit/spatial.hpp"
#include "chicrit/temporal.hpp"

namespace chicrit::criterion {

enum class Classification { Stochastic, NWP, Indeterminate };

/// `STOCHASTIC`, `NWP` or `INDETERMINATE`.
std::string_view to_token(Classification c) noexcept;

/// chi below `low` favours a stochastic forecaster, above `high` an NWP
/// model; the band in between is left undecided.
struct ChiThresholds {
    double low = 0.9;
    double high = 1.1;
};

struct ChiResult {
    double delta_pixels = 0.0;
    double tau_eff = 0.0;
    double chi = 0.0;  // pixel per time lag
    Classification classification = Classification::Indeterminate;
    ChiThresholds thresholds;
};

inline constexpr std::string_view kChiUnits = "pixel.time_lag^-1";

double chi(double delta_pixels, double tau_eff);
Classification classify(double chi_value, const ChiThresholds& t = {});
ChiResult evaluate(double delta_pixels, double tau_eff, const ChiThresholds& t = {});

/// chi computed after rounding tau/horizon to one decimal, as in published
/// hand calculations (7/12 -> 0.6 -> 1.67). Only used for report notes.
double chi_with_rounded_tau_eff(double delta_pixels, double tau, int horizon_steps);

struct ValidationScores {
    double nmbe_pct = 0.0;
    double nrmse_pct = 0.0;
    std::int64_t n = 0;
};

/// 100 * sum(est - meas) / sum(meas), over pairs where both are present.
double nmbe(std::span<const double> est, std::span<const double> meas);
/// 100 * sqrt(mean((est - meas)^2)) / mean(meas), same pairing.
double nrmse(std::span<const double> est, std::span<const double> meas);
ValidationScores validate(std::span<const double> est, std::span<const double> meas);

struct DatasetInfo {
    std::string fingerprint;
    std::size_t n_pixels = 0;
    std::size_t n_steps = 0;
    double grid_spacing_km = 0.0;
    std::int64_t step_s = 3600;
};

/// SHA-256 over the geometry and the aligned series values.
std::string fingerprint(const grid::GridSeriesSet& set);
DatasetInfo describe(const grid::GridSeriesSet& set);

struct ReportInputs {
    DatasetInfo dataset;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::optional<spatial::ExpDecayFit> fit;
    std::optional<spatial::DeltaResult> delta;
    std::optional<temporal::TauStats> tau;
    int horizon_steps = 1;
    ChiThresholds thresholds;
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
    std::vector<std::string> notes;
};

struct AnalysisReport {
    DatasetInfo dataset;
    nlohmann::ordered_json config;
    spatial::ExpDecayFit fit;
    spatial::DeltaResult delta;
    temporal::TauStats tau;
    int horizon_steps = 1;
    ChiResult chi;
    nlohmann::ordered_json artifacts;
    std::vector<std::string> notes;
};

AnalysisReport build_report(const ReportInputs& inputs);

/// Stable key order, numbers rounded to 12 significant digits, trailing
/// newline. Identical reports serialize to identical bytes.
std::string to_json(const AnalysisReport& report);

/// Rounds to `digits` significant decimal digits.
double round_significant(double v, int digits = 12);

}  // namespace chicrit::criterion
