// SPDX-License-Identifier: Apache-2.0

#include "chicrit/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chicrit/error.hpp"

namespace chicrit::info {

namespace {

constexpr int kMaxBins = 1 << 16;

std::vector<double> finite_sorted(std::span<const double> samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (double v : samples)
        if (std::isfinite(v)) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

// Linear-interpolated quantile of sorted data.
double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
}

int bin_count_for(const BinRule& rule, const std::vector<double>& sorted, double lo, double hi) {
    const std::size_t n = sorted.size();
    if (const auto* fixed = std::get_if<FixedCount>(&rule)) {
        if (fixed->n < 2)
            throw Error(ErrorCode::InvalidArgument, "FixedCount needs at least 2 bins, got " +
                                                        std::to_string(fixed->n));
        return fixed->n;
    }
    if (std::holds_alternative<FreedmanDiaconis>(rule)) {
        const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
        if (iqr > 0.0) {
            const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
            const double k = std::ceil((hi - lo) / width);
            return static_cast<int>(std::clamp(k, 2.0, static_cast<double>(kMaxBins)));
        }
        // zero IQR: fall through to Sturges
    }
    return std::max(2, sturges_bin_count(n));
}

double plogp_sum(std::span<const std::int64_t> counts, double n) {
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c <= 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

void require_non_empty(const JointHistogram& j) {
    if (j.n_total < 1) throw Error(ErrorCode::EmptyHistogram, "joint histogram has no counts");
}

}  // namespace

BinEdges::BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 3)
        throw Error(ErrorCode::InvalidArgument, "bin edges need at least 2 bins");
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (!(edges_[i] > edges_[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "bin edges must be strictly increasing");
}

int BinEdges::bin_of(double v) const noexcept {
    if (!(v >= edges_.front() && v <= edges_.back())) return -1;
    if (v == edges_.back()) return static_cast<int>(edges_.size()) - 2;
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
    return static_cast<int>(it - edges_.begin()) - 1;
}

std::vector<std::int64_t> JointHistogram::marginal_x() const {
    std::vector<std::int64_t> m(kx, 0);
    for (std::size_t i = 0; i < kx; ++i)
        for (std::size_t k = 0; k < ky; ++k) m[i] += counts[i * ky + k];
    return m;
}

std::vector<std::int64_t> JointHistogram::marginal_y() const {
    std::vector<std::int64_t> m(ky, 0);
    for (std::size_t i = 0; i < kx; ++i)
        for (std::size_t k = 0; k < ky; ++k) m[k] += counts[i * ky + k];
    return m;
}

JointHistogram JointHistogram::transposed() const {
    JointHistogram t;
    t.kx = ky;
    t.ky = kx;
    t.counts.assign(counts.size(), 0);
    for (std::size_t i = 0; i < kx; ++i)
        for (std::size_t k = 0; k < ky; ++k) t.counts[k * kx + i] = counts[i * ky + k];
    t.n_total = n_total;
    t.dropped = dropped;
    t.edges_x = edges_y;
    t.edges_y = edges_x;
    return t;
}

int sturges_bin_count(std::size_t n) noexcept {
    if (n <= 1) return 1;
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

BinEdges build_edges(std::span<const double> samples, const BinningSpec& spec) {
    const auto sorted = finite_sorted(samples);
    if (sorted.size() < 2)
        throw Error(ErrorCode::TooFewSamples,
                    "need at least 2 finite samples, got " + std::to_string(sorted.size()));

    double lo = sorted.front();
    double hi = sorted.back();
    if (const auto* range = std::get_if<ExplicitRange>(&spec.range)) {
        if (!(range->lo < range->hi))
            throw Error(ErrorCode::InvalidArgument, "explicit range needs lo < hi");
        lo = range->lo;
        hi = range->hi;
    } else if (lo == hi) {
        throw Error(ErrorCode::DegenerateSample, "all samples equal " + std::to_string(lo));
    }

    const int k = bin_count_for(spec.rule, sorted, lo, hi);
    std::vector<double> edges(static_cast<std::size_t>(k) + 1);
    const double width = (hi - lo) / k;
    for (int i = 0; i < k; ++i) edges[static_cast<std::size_t>(i)] = lo + i * width;
    edges.back() = hi;
    return BinEdges(std::move(edges));
}

BinnedSeries bin_series(std::span<const double> values, const BinEdges& edges) {
    BinnedSeries out{edges, std::vector<int>(values.size())};
    for (std::size_t i = 0; i < values.size(); ++i) out.bins[i] = edges.bin_of(values[i]);
    return out;
}

JointHistogram joint_histogram(std::span<const int> bx, std::span<const int> by,
                               const BinEdges& ex, const BinEdges& ey) {
    if (bx.size() != by.size())
        throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(bx.size()) +
                                                   " samples, y has " + std::to_string(by.size()));
    JointHistogram j;
    j.kx = ex.bin_count();
    j.ky = ey.bin_count();
    j.counts.assign(j.kx * j.ky, 0);
    j.edges_x = ex;
    j.edges_y = ey;
    for (std::size_t t = 0; t < bx.size(); ++t) {
        if (bx[t] < 0 || by[t] < 0) {
            ++j.dropped;
            continue;
        }
        ++j.counts[static_cast<std::size_t>(bx[t]) * j.ky + static_cast<std::size_t>(by[t])];
        ++j.n_total;
    }
    if (j.n_total == 0)
        throw Error(ErrorCode::EmptyAfterDeletion, "no co-present pairs after deletion");
    return j;
}

JointHistogram joint_histogram(std::span<const double> x, std::span<const double> y,
                               const BinEdges& ex, const BinEdges& ey) {
    if (x.size() != y.size())
        throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(x.size()) +
                                                   " samples, y has " + std::to_string(y.size()));
    const auto bx = bin_series(x, ex);
    const auto by = bin_series(y, ey);
    return joint_histogram(bx.bins, by.bins, ex, ey);
}

double entropy(std::span<const std::int64_t> counts) {
    const std::int64_t n = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (n < 1) throw Error(ErrorCode::EmptyHistogram, "entropy of an empty histogram");
    return plogp_sum(counts, static_cast<double>(n));
}

double joint_entropy(const JointHistogram& j) {
    require_non_empty(j);
    return plogp_sum(j.counts, static_cast<double>(j.n_total));
}

double conditional_entropy(const JointHistogram& j) {
    require_non_empty(j);
    const auto my = j.marginal_y();
    const double n = static_cast<double>(j.n_total);
    double h = 0.0;
    for (std::size_t i = 0; i < j.kx; ++i) {
        for (std::size_t k = 0; k < j.ky; ++k) {
            const auto c = j.at(i, k);
            if (c == 0) continue;
            // p(y)/p(x,y) == n_y / n_xy
            h += (static_cast<double>(c) / n) *
                 std::log2(static_cast<double>(my[k]) / static_cast<double>(c));
        }
    }
    return h;
}

MIResult mutual_information(const JointHistogram& j) {
    require_non_empty(j);
    const auto mx = j.marginal_x();
    const auto my = j.marginal_y();
    const double n = static_cast<double>(j.n_total);

    double mi = 0.0;
    for (std::size_t i = 0; i < j.kx; ++i) {
        for (std::size_t k = 0; k < j.ky; ++k) {
            const auto c = j.at(i, k);
            if (c == 0) continue;
            const double cxy = static_cast<double>(c);
            // p(x,y)/(p(x)p(y)) == n * n_xy / (n_x * n_y)
            mi += (cxy / n) * std::log2(n * cxy / (static_cast<double>(mx[i]) *
                                                   static_cast<double>(my[k])));
        }
    }

    MIResult r;
    r.mi_bits = mi;
    r.h_x_bits = plogp_sum(mx, n);
    r.h_y_bits = plogp_sum(my, n);
    r.h_x_given_y_bits = conditional_entropy(j);
    r.n_pairs = j.n_total;
    r.n_dropped = j.dropped;
    if (r.h_x_bits > 0.0) {
        r.nmi = std::clamp(mi / r.h_x_bits, 0.0, 1.0);
    } else {
        r.nmi = 0.0;
        r.degenerate_entropy = true;
    }
    return r;
}

MIResult normalized_mi(std::span<const double> x, std::span<const double> y,
                       const BinningSpec& spec) {
    if (x.size() != y.size())
        throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(x.size()) +
                                                   " samples, y has " + std::to_string(y.size()));
    const auto ex = build_edges(x, spec);
    const auto ey = build_edges(y, spec);
    return mutual_information(joint_histogram(x, y, ex, ey));
}

}  // namespace chicrit::info
