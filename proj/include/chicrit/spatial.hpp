// SPDX-License-Identifier: Apache-2.0
#pragma once

// Spatial decorrelation: nMI between pixel pairs as a function of their
// distance, an exponential-decay fit a*exp(-d/b) + c through that scatter,
// and the decorrelation distance derived from the fit.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chicrit/gridseries.hpp"
#include "chicrit/infotheory.hpp"

namespace chicrit::spatial {

struct AllPairs {};
/// Distance-stratified random subset of `m` pairs (equal share per decile).
struct RandomPairs {
    std::size_t m = 10000;
    std::uint64_t seed = 0;
};
using PairSampling = std::variant<AllPairs, RandomPairs>;

struct PairwiseOptions {
    grid::DistanceMode distance = grid::DistanceMode::Haversine;
    std::size_t min_samples = 100;
    double asymmetry_threshold = 0.05;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PairNMI {
    std::int64_t pixel_a = 0;
    std::int64_t pixel_b = 0;
    double distance_km = 0.0;
    double nmi_ab = 0.0;  // MI / H(a)
    double nmi_ba = 0.0;  // MI / H(b)
    double nmi = 0.0;     // mean of both orientations
    double mi_bits = 0.0;
    std::int64_t n_samples = 0;
    bool asymmetric = false;
};

struct CurvePoint {
    double distance_km = 0.0;
    double nmi = 0.0;
    std::int64_t pair_count = 0;
};

struct SpatialMICurve {
    std::vector<PairNMI> pairs;  // sorted by (distance, pixel_a, pixel_b)
    std::size_t n_candidate_pairs = 0;
    std::size_t n_skipped_sample_floor = 0;
    std::size_t n_skipped_colocated = 0;
    std::size_t n_skipped_degenerate = 0;
    std::size_t n_asymmetric = 0;
    std::string sampling;  // "all" or "random:<m>:<seed>"

    /// One point per pair, pair_count = 1.
    std::vector<CurvePoint> points() const;
    std::vector<double> distances() const;
    std::vector<double> values() const;
};

SpatialMICurve pairwise_nmi(const grid::GridSeriesSet& set, const info::BinningSpec& spec,
                            const PairSampling& sampling, const PairwiseOptions& options = {});

/// Averages the scatter into distance bins of `width_km`; each point carries
/// the mean distance and mean nMI of its members. Reporting only.
std::vector<CurvePoint> bin_by_distance(const SpatialMICurve& curve, double width_km);

struct ExpDecayParams {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
};

struct ExpDecayFit {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double rss = 0.0;
    int iterations = 0;
    bool converged = false;

    double operator()(double d) const;
};

struct FitOptions {
    int max_iterations = 200;
    double relative_tolerance = 1e-8;
    double initial_damping = 1e-3;
    double max_damping = 1e16;
};

double exp_decay_rss(const ExpDecayParams& p, std::span<const double> d, std::span<const double> y);

/// Starting point: c from the farthest 20% of distances, a = max - c, and b
/// where the data first fall below c + a/e (median distance otherwise).
ExpDecayParams initial_guess(std::span<const double> d, std::span<const double> y);

/// Least squares for y = a*exp(-d/b) + c with Marquardt-damped Gauss-Newton
/// steps. Damping grows tenfold on a rejected step and shrinks tenfold on an
/// accepted one; the fit converges when every parameter moves by less than
/// `relative_tolerance` of its magnitude.
ExpDecayFit fit_exp_decay(std::span<const double> d, std::span<const double> y,
                          std::optional<ExpDecayParams> init = std::nullopt,
                          const FitOptions& options = {});
ExpDecayFit fit_exp_decay(const SpatialMICurve& curve, std::optional<ExpDecayParams> init = std::nullopt,
                          const FitOptions& options = {});

struct DeltaResult {
    double delta_km = 0.0;
    double delta_pixels = 0.0;
    std::string method_note;
};

/// The tangent of the fit at d = 0 is y = (a + c) - (a/b) d and meets the
/// asymptote y = c at d = b, so delta is the fitted decay length.
DeltaResult extract_delta(const ExpDecayFit& fit, double grid_spacing_km);

/// `n` evenly spaced samples of the fitted curve over [0, d_max].
std::vector<CurvePoint> sample_fit(const ExpDecayFit& fit, double d_max, std::size_t n = 200);

}  // namespace chicrit::spatial
