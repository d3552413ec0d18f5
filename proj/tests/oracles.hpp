// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations used only by the tests. They are written directly
// from the definitions with plain loops and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<std::int64_t>>;

inline double total(const Table& t) {
    double n = 0.0;
    for (const auto& row : t)
        for (auto c : row) n += static_cast<double>(c);
    return n;
}

inline double entropy(const std::vector<std::int64_t>& counts) {
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

inline std::vector<std::int64_t> row_sums(const Table& t) {
    std::vector<std::int64_t> r;
    for (const auto& row : t) r.push_back(std::accumulate(row.begin(), row.end(), std::int64_t{0}));
    return r;
}

inline std::vector<std::int64_t> col_sums(const Table& t) {
    std::vector<std::int64_t> c(t.empty() ? 0 : t[0].size(), 0);
    for (const auto& row : t)
        for (std::size_t j = 0; j < row.size(); ++j) c[j] += row[j];
    return c;
}

/// Double sum of p(x,y) log2(p(x,y) / (p(x) p(y))) over probabilities.
inline double mi_double_sum(const Table& t) {
    const double n = total(t);
    const auto rx = row_sums(t);
    const auto cy = col_sums(t);
    double mi = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t[i].size(); ++j) {
            if (t[i][j] == 0) continue;
            const double pxy = static_cast<double>(t[i][j]) / n;
            const double px = static_cast<double>(rx[i]) / n;
            const double py = static_cast<double>(cy[j]) / n;
            mi += pxy * std::log2(pxy / (px * py));
        }
    return mi;
}

/// H(X|Y) as the double sum of p(x,y) log2(p(y) / p(x,y)); rows are X.
inline double conditional_entropy(const Table& t) {
    const double n = total(t);
    const auto cy = col_sums(t);
    double h = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t[i].size(); ++j) {
            if (t[i][j] == 0) continue;
            const double pxy = static_cast<double>(t[i][j]) / n;
            const double py = static_cast<double>(cy[j]) / n;
            h += pxy * std::log2(py / pxy);
        }
    return h;
}

/// Equal-width Sturges edges over the finite samples.
inline std::vector<double> sturges_edges(const std::vector<double>& v) {
    double lo = INFINITY, hi = -INFINITY;
    std::size_t n = 0;
    for (double x : v)
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            ++n;
        }
    const int k = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
    std::vector<double> e;
    for (int i = 0; i < k; ++i) e.push_back(lo + i * (hi - lo) / k);
    e.push_back(hi);
    return e;
}

/// Linear scan; the last bin includes its upper edge.
inline int bin_index(const std::vector<double>& edges, double v) {
    if (std::isnan(v) || v < edges.front() || v > edges.back()) return -1;
    const int k = static_cast<int>(edges.size()) - 1;
    for (int i = 0; i < k; ++i)
        if (v >= edges[i] && v < edges[i + 1]) return i;
    return k - 1;
}

/// MI between x_t and x_{t-lag}, binned with the given edges, by counting
/// pairs into a map and evaluating the double sum.
inline double lagged_mi(const std::vector<double>& v, const std::vector<double>& edges, int lag) {
    std::map<std::pair<int, int>, std::int64_t> joint;
    for (std::size_t t = static_cast<std::size_t>(lag); t < v.size(); ++t) {
        const int a = bin_index(edges, v[t]);
        const int b = bin_index(edges, v[t - lag]);
        if (a < 0 || b < 0) continue;
        ++joint[{a, b}];
    }
    const int k = static_cast<int>(edges.size()) - 1;
    Table t(k, std::vector<std::int64_t>(k, 0));
    for (const auto& [key, c] : joint) t[key.first][key.second] = c;
    return mi_double_sum(t);
}

/// Mean MI of x against random permutations of y, binned on a k-by-k
/// equal-width grid over each variable's range. Approximates the estimator's
/// bias floor for independent samples of the same marginals.
inline double shuffled_floor(const std::vector<double>& x, std::vector<double> y, int k, int rounds,
                             std::uint64_t seed) {
    auto edges_of = [k](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        std::vector<double> e;
        for (int i = 0; i < k; ++i) e.push_back(*lo + i * (*hi - *lo) / k);
        e.push_back(*hi);
        return e;
    };
    const auto ex = edges_of(x);
    const auto ey = edges_of(y);
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    for (int r = 0; r < rounds; ++r) {
        std::shuffle(y.begin(), y.end(), rng);
        Table t(k, std::vector<std::int64_t>(k, 0));
        for (std::size_t i = 0; i < x.size(); ++i) ++t[bin_index(ex, x[i])][bin_index(ey, y[i])];
        sum += mi_double_sum(t);
    }
    return sum / rounds;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) r[idx[m]] = avg;
        i = j + 1;
    }
    return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(ranks(a), ranks(b));
}

}  // namespace oracle
