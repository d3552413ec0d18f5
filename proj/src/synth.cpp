// SPDX-License-Identifier: Apache-2.0

#include "chicrit/synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "chicrit/error.hpp"

namespace chicrit::synth {

namespace {

constexpr double kOriginLat = 41.5;
constexpr double kOriginLon = 8.6;
constexpr int kMaxFieldPixels = 400;

void require_rho(double rho) {
    if (!(std::abs(rho) < 1.0))
        throw Error(ErrorCode::InvalidRho, "correlation must lie in (-1, 1), got " + std::to_string(rho));
}

void validate(const TemporalGenSpec& s) {
    if (s.n_days < 1) throw Error(ErrorCode::InvalidArgument, "n_days must be >= 1");
    if (!(s.sunrise_hour >= 0.0 && s.sunrise_hour < s.sunset_hour && s.sunset_hour <= 24.0))
        throw Error(ErrorCode::InvalidArgument, "need 0 <= sunrise < sunset <= 24");
    if (!(std::abs(s.ar_phi) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|ar_phi| must be < 1");
    if (!(s.noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise_sigma must be >= 0");
    if (!(s.diurnal_peak > 0.0)) throw Error(ErrorCode::InvalidArgument, "diurnal_peak must be > 0");
}

void validate(const SpatialGenSpec& s) {
    if (s.nx < 1 || s.ny < 1 || s.nx * s.ny < 4)
        throw Error(ErrorCode::InvalidArgument, "grid needs nx*ny >= 4");
    if (s.nx * s.ny > kMaxFieldPixels)
        throw Error(ErrorCode::InvalidArgument,
                    "dense covariance factorization is limited to " + std::to_string(kMaxFieldPixels) + " pixels");
    if (!(s.spacing_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be > 0");
    if (!(s.corr_length_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "correlation length must be > 0");
    if (s.n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
    if (s.diurnal) validate(*s.diurnal);
}

// Lower Cholesky factor of exp(-d/L), retrying with diagonal jitter up to 1e-8.
Eigen::MatrixXd covariance_factor(const grid::GridGeometry& g, double corr_length_km) {
    const auto n = static_cast<Eigen::Index>(g.pixels.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& a = g.pixels[static_cast<std::size_t>(i)];
            const auto& b = g.pixels[static_cast<std::size_t>(j)];
            cov(i, j) = std::exp(-std::hypot(*a.x_km - *b.x_km, *a.y_km - *b.y_km) / corr_length_km);
        }
    for (double jitter : {0.0, 1e-12, 1e-10, 1e-8}) {
        Eigen::MatrixXd m = cov;
        m.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw Error(ErrorCode::CovarianceNotPD, "covariance is not positive definite even with 1e-8 jitter");
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gen_bivariate_gaussian(double rho, std::size_t n,
                                                                           std::uint64_t seed) {
    require_rho(rho);
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const double tail = std::sqrt(1.0 - rho * rho);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = normal(rng);
        const double z = normal(rng);
        y[i] = rho * x[i] + tail * z;
    }
    return {std::move(x), std::move(y)};
}

double analytic_gaussian_mi(double rho) {
    require_rho(rho);
    return -0.5 * std::log2(1.0 - rho * rho);
}

double clearsky_envelope(int local_hour, const TemporalGenSpec& spec) {
    const double t = local_hour + 0.5;
    if (t <= spec.sunrise_hour || t >= spec.sunset_hour) return 0.0;
    return spec.diurnal_peak * std::sin(std::numbers::pi * (t - spec.sunrise_hour) /
                                        (spec.sunset_hour - spec.sunrise_hour));
}

grid::IrradianceSeries gen_temporal_series(const TemporalGenSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    const double innovation = spec.noise_sigma * std::sqrt(1.0 - spec.ar_phi * spec.ar_phi);

    grid::IrradianceSeries s;
    s.start_epoch_s = spec.start_epoch_s;
    s.step_s = 3600;
    const auto n = static_cast<std::size_t>(spec.n_days) * 24;
    s.values.resize(n);
    double anomaly = spec.noise_sigma * normal(rng);
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) anomaly = spec.ar_phi * anomaly + innovation * normal(rng);
        const double k = std::clamp(spec.mean_clearness + anomaly, 0.0, 1.0);
        const auto epoch = spec.start_epoch_s + static_cast<std::int64_t>(t) * 3600;
        s.values[t] = clearsky_envelope(grid::local_hour(epoch, spec.utc_offset_hours), spec) * k;
    }
    return s;
}

grid::GridGeometry make_grid(int nx, int ny, double spacing_km) {
    const double km_per_deg = grid::kEarthRadiusKm * std::numbers::pi / 180.0;
    grid::GridGeometry g;
    g.grid_spacing_km = spacing_km;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            grid::PixelMeta p;
            p.pixel_id = 1 + j * nx + i;
            p.x_km = i * spacing_km;
            p.y_km = j * spacing_km;
            p.lat_deg = kOriginLat + *p.y_km / km_per_deg;
            p.lon_deg = kOriginLon + *p.x_km / (km_per_deg * std::cos(kOriginLat * std::numbers::pi / 180.0));
            g.pixels.push_back(p);
        }
    }
    return g;
}

grid::GridSeriesSet gen_spatial_field(const SpatialGenSpec& spec) {
    validate(spec);
    grid::GridSeriesSet set;
    set.geometry = make_grid(spec.nx, spec.ny, spec.spacing_km);
    const auto n_pix = static_cast<Eigen::Index>(set.geometry.pixels.size());
    const auto n_steps = static_cast<Eigen::Index>(spec.n_steps);

    const Eigen::MatrixXd chol = covariance_factor(set.geometry, spec.corr_length_km);

    // Standard normals consumed pixel-major: all steps of pixel 1, then pixel 2, ...
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd z(n_pix, n_steps);
    for (Eigen::Index p = 0; p < n_pix; ++p)
        for (Eigen::Index t = 0; t < n_steps; ++t) z(p, t) = normal(rng);
    const Eigen::MatrixXd field = chol * z;

    set.time.step_s = 3600;
    set.time.epoch_s.resize(static_cast<std::size_t>(n_steps));
    for (Eigen::Index t = 0; t < n_steps; ++t)
        set.time.epoch_s[static_cast<std::size_t>(t)] = spec.start_epoch_s + t * 3600;

    for (Eigen::Index p = 0; p < n_pix; ++p) {
        auto& out = set.series[set.geometry.pixels[static_cast<std::size_t>(p)].pixel_id];
        out.resize(static_cast<std::size_t>(n_steps));
        if (!spec.diurnal) {
            for (Eigen::Index t = 0; t < n_steps; ++t)
                out[static_cast<std::size_t>(t)] = std::max(0.0, spec.mean_whm2 + spec.std_whm2 * field(p, t));
            continue;
        }
        const auto& d = *spec.diurnal;
        const double innovation = std::sqrt(1.0 - d.ar_phi * d.ar_phi);
        double anomaly = field(p, 0);
        for (Eigen::Index t = 0; t < n_steps; ++t) {
            if (t > 0) anomaly = d.ar_phi * anomaly + innovation * field(p, t);
            const double k = std::clamp(d.mean_clearness + d.noise_sigma * anomaly, 0.0, 1.0);
            const auto epoch = set.time.epoch_s[static_cast<std::size_t>(t)];
            out[static_cast<std::size_t>(t)] = clearsky_envelope(grid::local_hour(epoch, d.utc_offset_hours), d) * k;
        }
    }
    return set;
}

}  // namespace chicrit::synth
