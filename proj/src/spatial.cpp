// SPDX-License-Identifier: Apache-2.0

#include "chicrit/spatial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <map>
#include <set>
#include <tuple>

#include "chicrit/error.hpp"
#include "parallel.hpp"

namespace chicrit::spatial {

namespace {

struct PairIndex {
    std::size_t i;
    std::size_t j;
    double distance_km;
};

std::vector<PairIndex> stratified_sample(std::vector<PairIndex> pairs, const RandomPairs& rp) {
    if (rp.m >= pairs.size()) return pairs;
    std::sort(pairs.begin(), pairs.end(), [](const PairIndex& x, const PairIndex& y) {
        return std::tie(x.distance_km, x.i, x.j) < std::tie(y.distance_km, y.i, y.j);
    });
    constexpr std::size_t kStrata = 10;
    std::mt19937_64 rng(rp.seed);
    std::vector<PairIndex> picked;
    picked.reserve(rp.m);
    for (std::size_t s = 0; s < kStrata; ++s) {
        const std::size_t lo = pairs.size() * s / kStrata;
        const std::size_t hi = pairs.size() * (s + 1) / kStrata;
        std::size_t want = rp.m / kStrata + (s < rp.m % kStrata ? 1 : 0);
        want = std::min(want, hi - lo);
        // partial Fisher-Yates within the stratum
        for (std::size_t k = 0; k < want; ++k) {
            const std::size_t span = hi - lo - k;
            const std::size_t r = lo + k + static_cast<std::size_t>(rng() % span);
            std::swap(pairs[lo + k], pairs[r]);
            picked.push_back(pairs[lo + k]);
        }
    }
    return picked;
}

void validate_curve(std::span<const double> d, std::span<const double> y) {
    if (d.size() != y.size())
        throw Error(ErrorCode::LengthMismatch, "distance and nMI arrays differ in length");
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!std::isfinite(d[i]) || !std::isfinite(y[i]))
            throw Error(ErrorCode::InvalidArgument, "curve contains non-finite values");
    std::set<double> distinct(d.begin(), d.end());
    if (distinct.size() < 4)
        throw Error(ErrorCode::TooFewSamples, "exponential fit needs at least 4 distinct distances, got " +
                                                  std::to_string(distinct.size()));
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (*mx - *mn <= 1e-12 * std::max(1.0, std::abs(*mx)))
        throw Error(ErrorCode::DegenerateCurve, "nMI curve is flat");
}

}  // namespace

std::vector<CurvePoint> SpatialMICurve::points() const {
    std::vector<CurvePoint> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back({p.distance_km, p.nmi, 1});
    return out;
}

std::vector<double> SpatialMICurve::distances() const {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.distance_km);
    return out;
}

std::vector<double> SpatialMICurve::values() const {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.nmi);
    return out;
}

SpatialMICurve pairwise_nmi(const grid::GridSeriesSet& set, const info::BinningSpec& spec,
                            const PairSampling& sampling, const PairwiseOptions& options) {
    std::vector<const grid::PixelMeta*> pixels;
    for (const auto& p : set.geometry.pixels)
        if (set.series.contains(p.pixel_id)) pixels.push_back(&p);
    std::sort(pixels.begin(), pixels.end(),
              [](auto* x, auto* y) { return x->pixel_id < y->pixel_id; });
    if (pixels.size() < 2)
        throw Error(ErrorCode::NotEnoughPixels,
                    "spatial analysis needs at least 2 pixels, got " + std::to_string(pixels.size()));

    SpatialMICurve curve;
    std::vector<PairIndex> candidates;
    candidates.reserve(pixels.size() * (pixels.size() - 1) / 2);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        for (std::size_t j = i + 1; j < pixels.size(); ++j) {
            const double d = grid::pixel_distance(*pixels[i], *pixels[j], options.distance);
            if (d <= 0.0) {
                ++curve.n_skipped_colocated;
                continue;
            }
            candidates.push_back({i, j, d});
        }
    }
    if (const auto* rp = std::get_if<RandomPairs>(&sampling)) {
        candidates = stratified_sample(std::move(candidates), *rp);
        curve.sampling = "random:" + std::to_string(rp->m) + ":" + std::to_string(rp->seed);
    } else {
        curve.sampling = "all";
    }
    curve.n_candidate_pairs = candidates.size();

    // Each pixel is binned once with edges from its own full series.
    std::vector<std::optional<info::BinnedSeries>> binned(pixels.size());
    detail::parallel_for(pixels.size(), options.threads, [&](std::size_t k) {
        const auto values = set.values(pixels[k]->pixel_id);
        try {
            binned[k] = info::bin_series(values, info::build_edges(values, spec));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSample && e.code() != ErrorCode::TooFewSamples) throw;
        }
    });

    enum class Outcome { Kept, BelowFloor, Degenerate };
    std::vector<PairNMI> results(candidates.size());
    std::vector<Outcome> outcome(candidates.size(), Outcome::Kept);
    detail::parallel_for(candidates.size(), options.threads, [&](std::size_t k) {
        const auto& c = candidates[k];
        const auto& a = binned[c.i];
        const auto& b = binned[c.j];
        if (!a || !b) {
            outcome[k] = Outcome::Degenerate;
            return;
        }
        std::size_t co_present = 0;
        for (std::size_t t = 0; t < a->bins.size(); ++t)
            if (a->bins[t] >= 0 && b->bins[t] >= 0) ++co_present;
        if (co_present < std::max<std::size_t>(options.min_samples, 1)) {
            outcome[k] = Outcome::BelowFloor;
            return;
        }
        const auto mi = info::mutual_information(info::joint_histogram(a->bins, b->bins, a->edges, b->edges));
        auto& r = results[k];
        r.pixel_a = pixels[c.i]->pixel_id;
        r.pixel_b = pixels[c.j]->pixel_id;
        r.distance_km = c.distance_km;
        r.mi_bits = mi.mi_bits;
        r.n_samples = mi.n_pairs;
        r.nmi_ab = mi.h_x_bits > 0.0 ? std::clamp(mi.mi_bits / mi.h_x_bits, 0.0, 1.0) : 0.0;
        r.nmi_ba = mi.h_y_bits > 0.0 ? std::clamp(mi.mi_bits / mi.h_y_bits, 0.0, 1.0) : 0.0;
        r.nmi = 0.5 * (r.nmi_ab + r.nmi_ba);
        r.asymmetric = std::abs(r.nmi_ab - r.nmi_ba) > options.asymmetry_threshold;
    });

    for (std::size_t k = 0; k < candidates.size(); ++k) {
        switch (outcome[k]) {
            case Outcome::Kept:
                curve.n_asymmetric += results[k].asymmetric ? 1 : 0;
                curve.pairs.push_back(results[k]);
                break;
            case Outcome::BelowFloor: ++curve.n_skipped_sample_floor; break;
            case Outcome::Degenerate: ++curve.n_skipped_degenerate; break;
        }
    }
    if (curve.pairs.empty())
        throw Error(ErrorCode::AllPairsSkipped,
                    "every pixel pair was skipped (" + std::to_string(curve.n_skipped_sample_floor) +
                        " below the " + std::to_string(options.min_samples) + "-sample floor, " +
                        std::to_string(curve.n_skipped_degenerate) + " degenerate)");
    std::sort(curve.pairs.begin(), curve.pairs.end(), [](const PairNMI& x, const PairNMI& y) {
        return std::tie(x.distance_km, x.pixel_a, x.pixel_b) < std::tie(y.distance_km, y.pixel_a, y.pixel_b);
    });
    return curve;
}

std::vector<CurvePoint> bin_by_distance(const SpatialMICurve& curve, double width_km) {
    if (!(width_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "distance bin width must be > 0");
    struct Acc {
        double d = 0.0, y = 0.0;
        std::int64_t n = 0;
    };
    std::map<std::int64_t, Acc> bins;
    for (const auto& p : curve.pairs) {
        auto& acc = bins[static_cast<std::int64_t>(std::floor(p.distance_km / width_km))];
        acc.d += p.distance_km;
        acc.y += p.nmi;
        ++acc.n;
    }
    std::vector<CurvePoint> out;
    out.reserve(bins.size());
    for (const auto& [key, acc] : bins)
        out.push_back({acc.d / static_cast<double>(acc.n), acc.y / static_cast<double>(acc.n), acc.n});
    return out;
}

double ExpDecayFit::operator()(double d) const { return a * std::exp(-d / b) + c; }

double exp_decay_rss(const ExpDecayParams& p, std::span<const double> d, std::span<const double> y) {
    double rss = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double r = y[i] - (p.a * std::exp(-d[i] / p.b) + p.c);
        rss += r * r;
    }
    return rss;
}

ExpDecayParams initial_guess(std::span<const double> d, std::span<const double> y) {
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return d[i] < d[j]; });

    const std::size_t n_far = std::max<std::size_t>(1, (order.size() + 4) / 5);
    double c0 = 0.0;
    for (std::size_t k = order.size() - n_far; k < order.size(); ++k) c0 += y[order[k]];
    c0 /= static_cast<double>(n_far);

    const double a0 = *std::max_element(y.begin(), y.end()) - c0;
    if (!(a0 > 0.0)) throw Error(ErrorCode::DegenerateCurve, "nMI does not decay with distance");

    const double threshold = c0 + a0 / std::numbers::e;
    double b0 = d[order[order.size() / 2]];
    for (auto k : order) {
        if (y[k] < threshold) {
            if (d[k] > 0.0) b0 = d[k];
            break;
        }
    }
    if (!(b0 > 0.0)) b0 = 1.0;
    return {a0, b0, c0};
}

ExpDecayFit fit_exp_decay(std::span<const double> d, std::span<const double> y,
                          std::optional<ExpDecayParams> init, const FitOptions& options) {
    validate_curve(d, y);
    ExpDecayParams p = init ? *init : initial_guess(d, y);
    if (!(p.b > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial decay length must be > 0");

    const std::size_t n = d.size();
    Eigen::MatrixX3d jac(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd resid(static_cast<Eigen::Index>(n));

    auto linearize = [&](const ExpDecayParams& q) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double e = std::exp(-d[i] / q.b);
            jac(row, 0) = e;
            jac(row, 1) = q.a * e * d[i] / (q.b * q.b);
            jac(row, 2) = 1.0;
            resid(row) = y[i] - (q.a * e + q.c);
        }
    };

    ExpDecayFit fit;
    double rss = exp_decay_rss(p, d, y);
    double lambda = options.initial_damping;

    for (int iter = 1; iter <= options.max_iterations && !fit.converged; ++iter) {
        fit.iterations = iter;
        linearize(p);
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * resid;

        while (true) {
            Eigen::Matrix3d damped = jtj;
            for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
            const Eigen::Vector3d step = damped.ldlt().solve(jtr);
            if (!step.allFinite()) throw Error(ErrorCode::FitDiverged, "non-finite Gauss-Newton step");

            const ExpDecayParams trial{p.a + step(0), p.b + step(1), p.c + step(2)};
            const bool small = std::abs(step(0)) <= options.relative_tolerance * std::abs(p.a) &&
                               std::abs(step(1)) <= options.relative_tolerance * std::abs(p.b) &&
                               std::abs(step(2)) <= options.relative_tolerance * std::max(std::abs(p.c), 1e-12);
            const double trial_rss = trial.b > 0.0 ? exp_decay_rss(trial, d, y) : HUGE_VAL;

            if (trial_rss <= rss) {
                p = trial;
                rss = trial_rss;
                lambda = std::max(lambda / 10.0, 1e-15);
                fit.converged = small;
                break;
            }
            if (small) {
                // the damped step no longer changes anything measurable
                fit.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > options.max_damping)
                throw Error(ErrorCode::FitDiverged, "damping exceeded " + std::to_string(options.max_damping));
        }
    }

    fit.a = p.a;
    fit.b = p.b;
    fit.c = p.c;
    fit.rss = rss;
    return fit;
}

ExpDecayFit fit_exp_decay(const SpatialMICurve& curve, std::optional<ExpDecayParams> init,
                          const FitOptions& options) {
    const auto d = curve.distances();
    const auto y = curve.values();
    return fit_exp_decay(d, y, init, options);
}

DeltaResult extract_delta(const ExpDecayFit& fit, double grid_spacing_km) {
    if (!fit.converged)
        throw Error(ErrorCode::UnconvergedFit,
                    "exponential fit did not converge after " + std::to_string(fit.iterations) + " iterations");
    if (!(fit.b > 0.0)) throw Error(ErrorCode::InvalidArgument, "fitted decay length must be > 0");
    if (!(grid_spacing_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be > 0");
    return {fit.b, fit.b / grid_spacing_km,
            "intersection of the tangent at d=0 with the asymptote c; equals the fitted decay length b"};
}

std::vector<CurvePoint> sample_fit(const ExpDecayFit& fit, double d_max, std::size_t n) {
    if (n < 2 || !(d_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample_fit needs n >= 2 and d_max > 0");
    std::vector<CurvePoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = d_max * static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = {dist, fit(dist), 0};
    }
    return out;
}

}  // namespace chicrit::spatial
