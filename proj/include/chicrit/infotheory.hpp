// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plug-in (histogram) estimators of entropy, conditional entropy and mutual
// information. Every quantity is in bits. Missing samples are NaN and are
// removed by pairwise deletion before counting.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace chicrit::info {

struct FixedCount {
    int n = 10;
};
struct Sturges {};
struct FreedmanDiaconis {};
using BinRule = std::variant<FixedCount, Sturges, FreedmanDiaconis>;

struct DataMinMax {};
struct ExplicitRange {
    double lo = 0.0;
    double hi = 1.0;
};
using RangePolicy = std::variant<DataMinMax, ExplicitRange>;

struct BinningSpec {
    BinRule rule = Sturges{};
    RangePolicy range = DataMinMax{};
};

/// Bin boundaries, k+1 strictly increasing values for k bins. Bins are
/// half-open [e_i, e_{i+1}) except the last one, which is closed so the
/// range maximum is counted.
class BinEdges {
public:
    BinEdges() = default;
    explicit BinEdges(std::vector<double> edges);

    std::size_t bin_count() const noexcept { return edges_.empty() ? 0 : edges_.size() - 1; }
    double lo() const { return edges_.front(); }
    double hi() const { return edges_.back(); }
    const std::vector<double>& values() const noexcept { return edges_; }

    /// Bin index of `v`, or -1 when `v` is NaN or outside [lo, hi].
    int bin_of(double v) const noexcept;

    bool operator==(const BinEdges&) const = default;

private:
    std::vector<double> edges_;
};

/// A series already mapped to bin indices (-1 marks a missing or
/// out-of-range sample). Lets repeated MI evaluations skip re-binning.
struct BinnedSeries {
    BinEdges edges;
    std::vector<int> bins;
};

struct JointHistogram {
    std::size_t kx = 0;
    std::size_t ky = 0;
    std::vector<std::int64_t> counts;  // row-major, kx rows by ky columns
    std::int64_t n_total = 0;
    std::int64_t dropped = 0;
    BinEdges edges_x;
    BinEdges edges_y;

    std::int64_t at(std::size_t ix, std::size_t iy) const { return counts[ix * ky + iy]; }
    std::vector<std::int64_t> marginal_x() const;
    std::vector<std::int64_t> marginal_y() const;
    JointHistogram transposed() const;
};

struct MIResult {
    double mi_bits = 0.0;
    double h_x_bits = 0.0;
    double h_y_bits = 0.0;
    double h_x_given_y_bits = 0.0;
    double nmi = 0.0;
    std::int64_t n_pairs = 0;
    std::int64_t n_dropped = 0;
    /// Set when H(X) == 0, in which case nmi is reported as 0.
    bool degenerate_entropy = false;
};

int sturges_bin_count(std::size_t n) noexcept;

BinEdges build_edges(std::span<const double> samples, const BinningSpec& spec);

BinnedSeries bin_series(std::span<const double> values, const BinEdges& edges);

JointHistogram joint_histogram(std::span<const double> x, std::span<const double> y,
                               const BinEdges& ex, const BinEdges& ey);

/// Joint counts from pre-binned, equally long index sequences.
JointHistogram joint_histogram(std::span<const int> bx, std::span<const int> by,
                               const BinEdges& ex, const BinEdges& ey);

double entropy(std::span<const std::int64_t> counts);
double joint_entropy(const JointHistogram& j);

/// H(X|Y) = sum p(x,y) log2(p(y) / p(x,y)).
double conditional_entropy(const JointHistogram& j);

/// MI as the double sum of p(x,y) log2(p(x,y) / (p(x) p(y))), together with
/// the marginal and conditional entropies of the same histogram.
MIResult mutual_information(const JointHistogram& j);

/// MI(X,Y) / H(X). Edges for each variable come from that variable's own
/// finite samples, so nmi(x, x) == 1 for any non-constant x.
MIResult normalized_mi(std::span<const double> x, std::span<const double> y,
                       const BinningSpec& spec);

}  // namespace chicrit::info
