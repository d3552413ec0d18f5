// SPDX-License-Identifier: Apache-2.0

#include "chicrit/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "chicrit/error.hpp"
#include "parallel.hpp"

namespace chicrit::temporal {

AutoMICurve auto_mi(std::int64_t pixel_id, std::span<const double> values, int max_lag,
                    const info::BinningSpec& spec, const AutoMIOptions& options) {
    if (max_lag < 2) throw Error(ErrorCode::InvalidArgument, "max_lag must be >= 2");
    const auto lag_max = static_cast<std::size_t>(max_lag);
    if (values.size() <= lag_max + options.min_pairs)
        throw Error(ErrorCode::SeriesTooShort,
                    "pixel " + std::to_string(pixel_id) + ": " + std::to_string(values.size()) +
                        " samples cannot support lag " + std::to_string(max_lag) + " with " +
                        std::to_string(options.min_pairs) + " pairs per lag");

    const auto binned = info::bin_series(values, info::build_edges(values, spec));
    const std::span<const int> bins(binned.bins);

    AutoMICurve curve;
    curve.pixel_id = pixel_id;
    for (int lag = 1; lag <= max_lag; ++lag) {
        const auto l = static_cast<std::size_t>(lag);
        const auto current = bins.subspan(l);
        const auto lagged = bins.first(bins.size() - l);
        std::size_t co_present = 0;
        for (std::size_t t = 0; t < current.size(); ++t)
            if (current[t] >= 0 && lagged[t] >= 0) ++co_present;
        if (co_present < std::max<std::size_t>(options.min_pairs, 1))
            throw Error(ErrorCode::SeriesTooShort, "pixel " + std::to_string(pixel_id) + ": only " +
                                                       std::to_string(co_present) +
                                                       " co-present pairs at lag " + std::to_string(lag));
        const auto mi = info::mutual_information(
            info::joint_histogram(current, lagged, binned.edges, binned.edges));
        curve.lags.push_back(lag);
        curve.mi_bits.push_back(mi.mi_bits);
        curve.nmi.push_back(mi.nmi);
    }
    return curve;
}

AutoMICurve auto_mi(const grid::IrradianceSeries& series, int max_lag, const info::BinningSpec& spec,
                    const AutoMIOptions& options) {
    return auto_mi(0, series.values, max_lag, spec, options);
}

TauResult first_minimum(const AutoMICurve& curve, double tol, TauPolicy policy) {
    const auto& mi = curve.mi_bits;
    if (mi.size() < 3)
        throw Error(ErrorCode::CurveTooShort, "first-minimum search needs at least 3 lags");
    if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");

    for (std::size_t k = 1; k + 1 < mi.size(); ++k) {
        if (!(mi[k - 1] - mi[k] > tol && mi[k + 1] - mi[k] >= -tol)) continue;
        std::size_t end = k;
        while (end + 1 < mi.size() && std::abs(mi[end + 1] - mi[k]) <= tol) ++end;

        TauResult r;
        r.pixel_id = curve.pixel_id;
        r.plateau_start = curve.lags[k];
        r.plateau_end = curve.lags[end];
        switch (policy) {
            case TauPolicy::PlateauStart: r.tau = r.plateau_start; break;
            case TauPolicy::PlateauEnd: r.tau = r.plateau_end; break;
            case TauPolicy::Midpoint: r.tau = 0.5 * (r.plateau_start + r.plateau_end); break;
        }
        return r;
    }
    throw Error(ErrorCode::NoMinimum, "pixel " + std::to_string(curve.pixel_id) +
                                          ": no local minimum of MI before lag " +
                                          std::to_string(curve.lags.back()));
}

TauStats summarize_taus(std::vector<TauResult> per_pixel, std::size_t n_no_minimum) {
    if (per_pixel.empty())
        throw Error(ErrorCode::NoPixelConverged,
                    "no pixel produced a first minimum (" + std::to_string(n_no_minimum) + " without one)");
    std::sort(per_pixel.begin(), per_pixel.end(),
              [](const TauResult& x, const TauResult& y) { return x.pixel_id < y.pixel_id; });

    std::vector<double> taus;
    taus.reserve(per_pixel.size());
    for (const auto& r : per_pixel) taus.push_back(r.tau);
    std::sort(taus.begin(), taus.end());

    TauStats s;
    const std::size_t n = taus.size();
    s.min = taus.front();
    s.max = taus.back();
    s.median = n % 2 == 1 ? taus[n / 2] : 0.5 * (taus[n / 2 - 1] + taus[n / 2]);
    s.mean = std::accumulate(taus.begin(), taus.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double t : taus) ss += (t - s.mean) * (t - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n));
    s.per_pixel = std::move(per_pixel);
    s.n_no_minimum = n_no_minimum;
    return s;
}

TauStats tau_statistics(const grid::GridSeriesSet& set, const info::BinningSpec& spec,
                        const TauOptions& options, std::vector<AutoMICurve>* curves_out) {
    std::vector<std::int64_t> ids;
    ids.reserve(set.series.size());
    for (const auto& [id, values] : set.series) ids.push_back(id);  // std::map keeps ids sorted

    std::vector<AutoMICurve> curves(ids.size());
    std::vector<std::optional<TauResult>> found(ids.size());
    detail::parallel_for(ids.size(), options.threads, [&](std::size_t k) {
        curves[k] = auto_mi(ids[k], set.values(ids[k]), options.max_lag, spec, options.auto_mi);
        try {
            found[k] = first_minimum(curves[k], options.tol, options.policy);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoMinimum) throw;
        }
    });

    std::vector<TauResult> per_pixel;
    std::size_t missing = 0;
    for (auto& f : found) {
        if (f)
            per_pixel.push_back(*f);
        else
            ++missing;
    }
    if (curves_out) *curves_out = std::move(curves);
    return summarize_taus(std::move(per_pixel), missing);
}

double effective_tau(double tau, int horizon_steps) {
    if (!(tau > 0.0)) throw Error(ErrorCode::NonPositiveInput, "tau must be > 0");
    if (horizon_steps < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1 step");
    return tau / static_cast<double>(horizon_steps);
}

}  // namespace chicrit::temporal
