// SPDX-License-Identifier: Apache-2.0

#include "chicrit/criterion.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "chicrit/error.hpp"

namespace chicrit::criterion {

namespace {

struct Pairs {
    double sum_est = 0.0;
    double sum_meas = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;
};

Pairs pair_up(std::span<const double> est, std::span<const double> meas) {
    if (est.size() != meas.size())
        throw Error(ErrorCode::LengthMismatch, "estimate has " + std::to_string(est.size()) +
                                                   " samples, measurement " + std::to_string(meas.size()));
    Pairs p;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (std::isnan(est[i]) || std::isnan(meas[i])) continue;
        p.sum_est += est[i];
        p.sum_meas += meas[i];
        p.sum_sq += (est[i] - meas[i]) * (est[i] - meas[i]);
        ++p.n;
    }
    if (p.n == 0) throw Error(ErrorCode::EmptyAfterDeletion, "no co-present estimate/measurement pairs");
    if (!(p.sum_meas > 0.0)) throw Error(ErrorCode::ZeroMeasurementMean, "mean measurement is not positive");
    return p;
}

double nmbe_of(const Pairs& p) { return 100.0 * (p.sum_est - p.sum_meas) / p.sum_meas; }

double nrmse_of(const Pairs& p) {
    const double n = static_cast<double>(p.n);
    return 100.0 * std::sqrt(p.sum_sq / n) / (p.sum_meas / n);
}

using Json = nlohmann::ordered_json;

Json num(double v) { return round_significant(v); }

}  // namespace

std::string_view to_token(Classification c) noexcept {
    switch (c) {
        case Classification::Stochastic: return "STOCHASTIC";
        case Classification::NWP: return "NWP";
        case Classification::Indeterminate: return "INDETERMINATE";
    }
    return "INDETERMINATE";
}

double chi(double delta_pixels, double tau_eff) {
    if (!(delta_pixels > 0.0) || !(tau_eff > 0.0))
        throw Error(ErrorCode::NonPositiveInput, "chi needs delta > 0 and tau > 0");
    return delta_pixels / tau_eff;
}

Classification classify(double chi_value, const ChiThresholds& t) {
    if (!(t.low > 0.0) || t.low > t.high)
        throw Error(ErrorCode::InvalidArgument, "thresholds need 0 < low <= high");
    if (chi_value < t.low) return Classification::Stochastic;
    if (chi_value > t.high) return Classification::NWP;
    return Classification::Indeterminate;
}

ChiResult evaluate(double delta_pixels, double tau_eff, const ChiThresholds& t) {
    ChiResult r;
    r.delta_pixels = delta_pixels;
    r.tau_eff = tau_eff;
    r.chi = chi(delta_pixels, tau_eff);
    r.classification = classify(r.chi, t);
    r.thresholds = t;
    return r;
}

double chi_with_rounded_tau_eff(double delta_pixels, double tau, int horizon_steps) {
    const double rounded = std::round(temporal::effective_tau(tau, horizon_steps) * 10.0) / 10.0;
    return chi(delta_pixels, rounded);
}

double nmbe(std::span<const double> est, std::span<const double> meas) { return nmbe_of(pair_up(est, meas)); }

double nrmse(std::span<const double> est, std::span<const double> meas) { return nrmse_of(pair_up(est, meas)); }

ValidationScores validate(std::span<const double> est, std::span<const double> meas) {
    const auto p = pair_up(est, meas);
    return {nmbe_of(p), nrmse_of(p), p.n};
}

std::string fingerprint(const grid::GridSeriesSet& set) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::Io, "SHA-256 unavailable");
    const auto geometry = grid::format_grid(set.geometry);
    EVP_DigestUpdate(ctx.get(), geometry.data(), geometry.size());
    EVP_DigestUpdate(ctx.get(), set.time.epoch_s.data(), set.time.epoch_s.size() * sizeof(std::int64_t));
    for (const auto& [id, values] : set.series) {
        EVP_DigestUpdate(ctx.get(), &id, sizeof id);
        EVP_DigestUpdate(ctx.get(), values.data(), values.size() * sizeof(double));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex = "sha256:";
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

DatasetInfo describe(const grid::GridSeriesSet& set) {
    return {fingerprint(set), set.series.size(), set.n_steps(), set.geometry.grid_spacing_km, set.time.step_s};
}

AnalysisReport build_report(const ReportInputs& in) {
    if (!in.fit || !in.delta) throw Error(ErrorCode::MissingComponent, "report needs a spatial fit and delta");
    if (!in.tau || in.tau->per_pixel.empty())
        throw Error(ErrorCode::MissingComponent, "report needs tau from at least one pixel");

    AnalysisReport r;
    r.dataset = in.dataset;
    r.config = in.config;
    r.fit = *in.fit;
    r.delta = *in.delta;
    r.tau = *in.tau;
    r.horizon_steps = in.horizon_steps;
    r.chi = evaluate(in.delta->delta_pixels, temporal::effective_tau(in.tau->median, in.horizon_steps),
                     in.thresholds);
    r.artifacts = in.artifacts;
    r.notes = in.notes;
    if (in.horizon_steps > 1) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "tau_eff rounded to one decimal (%.1f) gives chi = %.2f; value above is full precision",
                      std::round(r.chi.tau_eff * 10.0) / 10.0,
                      chi_with_rounded_tau_eff(r.chi.delta_pixels, r.tau.median, in.horizon_steps));
        r.notes.emplace_back(buf);
    }
    return r;
}

std::string to_json(const AnalysisReport& r) {
    Json j;
    j["dataset"] = {{"fingerprint", r.dataset.fingerprint},
                    {"n_pixels", r.dataset.n_pixels},
                    {"n_steps", r.dataset.n_steps},
                    {"grid_spacing_km", num(r.dataset.grid_spacing_km)},
                    {"step_seconds", r.dataset.step_s}};
    j["config"] = r.config;
    j["delta"] = {{"km", num(r.delta.delta_km)},
                  {"pixels", num(r.delta.delta_pixels)},
                  {"method", r.delta.method_note},
                  {"fit",
                   {{"a", num(r.fit.a)},
                    {"b", num(r.fit.b)},
                    {"c", num(r.fit.c)},
                    {"rss", num(r.fit.rss)},
                    {"iterations", r.fit.iterations},
                    {"converged", r.fit.converged}}}};
    j["tau"] = {{"median", num(r.tau.median)},
                {"min", num(r.tau.min)},
                {"max", num(r.tau.max)},
                {"mean", num(r.tau.mean)},
                {"std", num(r.tau.std)},
                {"n_pixels", r.tau.per_pixel.size()},
                {"n_no_minimum", r.tau.n_no_minimum},
                {"per_pixel_path", r.artifacts.value("tau_per_pixel", std::string{})}};
    j["chi"] = {{"value", num(r.chi.chi)},
                {"units", std::string(kChiUnits)},
                {"classification", std::string(to_token(r.chi.classification))},
                {"thresholds", {{"low", num(r.chi.thresholds.low)}, {"high", num(r.chi.thresholds.high)}}},
                {"delta_pixels", num(r.chi.delta_pixels)},
                {"tau", num(r.tau.median)},
                {"tau_eff", num(r.chi.tau_eff)},
                {"horizon_steps", r.horizon_steps}};
    j["artifacts"] = r.artifacts;
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

double round_significant(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

}  // namespace chicrit::criterion
