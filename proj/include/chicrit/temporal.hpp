// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chicrit/gridseries.hpp"
#include "chicrit/infotheory.hpp"

namespace chicrit::temporal {

/// Auto-mutual-information of one series; entry k holds lag k + 1.
struct AutoMICurve {
    std::int64_t pixel_id = 0;
    std::vector<int> lags;
    std::vector<double> mi_bits;
    std::vector<double> nmi;
};

enum class TauPolicy { PlateauStart, PlateauEnd, Midpoint };

struct TauResult {
    std::int64_t pixel_id = 0;
    int plateau_start = 0;
    int plateau_end = 0;
    double tau = 0.0;  // time steps
};

struct TauStats {
    std::vector<TauResult> per_pixel;  // ascending pixel_id
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    std::size_t n_no_minimum = 0;
};

struct AutoMIOptions {
    std::size_t min_pairs = 100;
};

/// MI between x_t and x_{t-lag} for lag = 1..max_lag. Bin edges come from the
/// whole series and are reused at every lag; missing pairs are deleted.
AutoMICurve auto_mi(std::int64_t pixel_id, std::span<const double> values, int max_lag,
                    const info::BinningSpec& spec, const AutoMIOptions& options = {});
AutoMICurve auto_mi(const grid::IrradianceSeries& series, int max_lag, const info::BinningSpec& spec,
                    const AutoMIOptions& options = {});

/// First lag whose MI drops by more than `tol` from the previous lag and does
/// not rise by more than `tol` at the next one. Following lags within `tol`
/// of that value extend the plateau; tau is taken from the plateau per
/// `policy`. Operates on mi_bits.
TauResult first_minimum(const AutoMICurve& curve, double tol = 0.005,
                        TauPolicy policy = TauPolicy::PlateauEnd);

/// Order statistics over per-pixel results.
TauStats summarize_taus(std::vector<TauResult> per_pixel, std::size_t n_no_minimum = 0);

struct TauOptions {
    int max_lag = 24;
    double tol = 0.005;
    TauPolicy policy = TauPolicy::PlateauEnd;
    AutoMIOptions auto_mi;
    unsigned threads = 0;
};

/// Per-pixel first minima across the whole set. Pixels whose curve has no
/// minimum are excluded and counted. `curves_out`, when given, receives every
/// pixel's curve in ascending pixel_id order.
TauStats tau_statistics(const grid::GridSeriesSet& set, const info::BinningSpec& spec,
                        const TauOptions& options = {}, std::vector<AutoMICurve>* curves_out = nullptr);

/// tau divided by the forecast horizon in steps.
double effective_tau(double tau, int horizon_steps);

}  // namespace chicrit::temporal
