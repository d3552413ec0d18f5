// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded generators for ground-truth datasets. Output is bit-identical for an
// identical spec and seed on a given standard library.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chicrit/gridseries.hpp"

namespace chicrit::synth {

/// 2005-01-01T00:00:00Z
inline constexpr std::int64_t kDefaultStartEpoch = 1104537600;

struct TemporalGenSpec {
    int n_days = 365;
    double diurnal_peak = 800.0;  // Wh/m2 at solar noon under clear sky
    double sunrise_hour = 6.0;    // local time
    double sunset_hour = 18.0;
    double ar_phi = 0.8;
    double noise_sigma = 0.15;  // stationary std of the clear-sky index anomaly
    double mean_clearness = 0.7;
    double utc_offset_hours = 1.0;
    std::int64_t start_epoch_s = kDefaultStartEpoch;
    std::uint64_t seed = 0;
};

struct SpatialGenSpec {
    int nx = 12;
    int ny = 12;
    double spacing_km = 2.5;
    double corr_length_km = 5.0;
    int n_steps = 5000;
    std::uint64_t seed = 0;
    double mean_whm2 = 500.0;
    double std_whm2 = 100.0;
    std::int64_t start_epoch_s = kDefaultStartEpoch;
    /// When set, the field drives the clear-sky index anomaly of a diurnal
    /// series (AR(1) in time, exponential kernel in space) instead of being
    /// drawn independently per step. `n_steps` then counts hours.
    std::optional<TemporalGenSpec> diurnal;
};

std::pair<std::vector<double>, std::vector<double>> gen_bivariate_gaussian(double rho, std::size_t n,
                                                                           std::uint64_t seed);

/// -0.5 * log2(1 - rho^2), the MI of a bivariate normal with correlation rho.
double analytic_gaussian_mi(double rho);

/// Half-sine clear-sky envelope between sunrise and sunset, 0 at night;
/// evaluated at the middle of the local hour.
double clearsky_envelope(int local_hour, const TemporalGenSpec& spec);

grid::IrradianceSeries gen_temporal_series(const TemporalGenSpec& spec);

/// Regular nx-by-ny grid with planar coordinates and matching lat/lon around
/// a fixed origin. Pixel ids run 1..nx*ny, row-major.
grid::GridGeometry make_grid(int nx, int ny, double spacing_km);

grid::GridSeriesSet gen_spatial_field(const SpatialGenSpec& spec);

}  // namespace chicrit::synth
