// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "chicrit/error.hpp"
#include "chicrit/infotheory.hpp"
#include "chicrit/synth.hpp"
#include "oracles.hpp"

using namespace chicrit;
using namespace chicrit::info;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

JointHistogram from_table(const oracle::Table& t) {
    JointHistogram j;
    j.kx = t.size();
    j.ky = t[0].size();
    for (const auto& row : t)
        for (auto c : row) {
            j.counts.push_back(c);
            j.n_total += c;
        }
    return j;
}

oracle::Table random_table(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(2, 32);
    std::uniform_int_distribution<int> sparse(0, 3);
    std::uniform_int_distribution<std::int64_t> count(1, 50);
    const int kx = size(rng), ky = size(rng);
    oracle::Table t(kx, std::vector<std::int64_t>(ky, 0));
    for (auto& row : t)
        for (auto& c : row) c = sparse(rng) == 0 ? 0 : count(rng);
    t[0][0] += 1;
    return t;
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no chicrit::Error thrown");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("build_edges", "[infotheory]") {
    SECTION("fixed count splits the range evenly") {
        std::vector<double> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        const auto e = build_edges(v, {FixedCount{2}, DataMinMax{}});
        REQUIRE(e.values() == std::vector<double>{0.0, 4.5, 9.0});
    }
    SECTION("sturges on 1024 samples gives 11 bins") {
        std::vector<double> v(1024);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
        REQUIRE(build_edges(v, {}).bin_count() == 11);
        REQUIRE(sturges_bin_count(1024) == 11);
        REQUIRE(sturges_bin_count(1025) == 12);
    }
    SECTION("constant samples are degenerate") {
        std::vector<double> v(10, 5.0);
        REQUIRE(code_of([&] { build_edges(v, {}); }) == ErrorCode::DegenerateSample);
    }
    SECTION("fewer than two finite samples") {
        std::vector<double> v{1.0, kNaN, kNaN};
        REQUIRE(code_of([&] { build_edges(v, {}); }) == ErrorCode::TooFewSamples);
    }
    SECTION("explicit range is used as given") {
        std::vector<double> v{0.2, 0.4};
        const auto e = build_edges(v, {FixedCount{4}, ExplicitRange{0.0, 1.0}});
        REQUIRE(e.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    }
    SECTION("invalid specs") {
        std::vector<double> v{0, 1, 2};
        REQUIRE(code_of([&] { build_edges(v, {FixedCount{1}, DataMinMax{}}); }) == ErrorCode::InvalidArgument);
        REQUIRE(code_of([&] { build_edges(v, {Sturges{}, ExplicitRange{1.0, 1.0}}); }) ==
                ErrorCode::InvalidArgument);
    }
    SECTION("freedman-diaconis on a skewed sample") {
        std::vector<double> v;
        for (int i = 0; i < 1000; ++i) v.push_back(std::sqrt(static_cast<double>(i)));
        const auto e = build_edges(v, {FreedmanDiaconis{}, DataMinMax{}});
        REQUIRE(e.bin_count() >= 2);
        REQUIRE(e.lo() == 0.0);
        REQUIRE(e.hi() == v.back());
    }
    SECTION("maximum lands in the closed last bin") {
        std::vector<double> v{0, 1, 2, 3};
        const auto e = build_edges(v, {FixedCount{3}, DataMinMax{}});
        REQUIRE(e.bin_of(3.0) == 2);
        REQUIRE(e.bin_of(0.0) == 0);
        REQUIRE(e.bin_of(3.5) == -1);
        REQUIRE(e.bin_of(kNaN) == -1);
    }
}

TEST_CASE("joint_histogram", "[infotheory]") {
    const BinEdges unit({0.0, 1.0, 2.0});
    SECTION("diagonal") {
        std::vector<double> x{0, 1}, y{0, 1};
        const auto j = joint_histogram(x, y, unit, unit);
        REQUIRE(j.counts == std::vector<std::int64_t>{1, 0, 0, 1});
        REQUIRE(j.n_total == 2);
    }
    SECTION("all four cells") {
        std::vector<double> x{0, 0, 1, 1}, y{0, 1, 0, 1};
        REQUIRE(joint_histogram(x, y, unit, unit).counts == std::vector<std::int64_t>{1, 1, 1, 1});
    }
    SECTION("pairwise deletion") {
        std::vector<double> x{0, kNaN, 1}, y{0, 0, 1};
        const auto j = joint_histogram(x, y, unit, unit);
        REQUIRE(j.n_total == 2);
        REQUIRE(j.dropped == 1);
    }
    SECTION("out of explicit range is dropped") {
        std::vector<double> x{0, 5, 1}, y{0, 0, 1};
        REQUIRE(joint_histogram(x, y, unit, unit).dropped == 1);
    }
    SECTION("errors") {
        std::vector<double> x{0, 1}, y{0};
        REQUIRE(code_of([&] { joint_histogram(x, y, unit, unit); }) == ErrorCode::LengthMismatch);
        std::vector<double> a{kNaN, 0}, b{0, kNaN};
        REQUIRE(code_of([&] { joint_histogram(a, b, unit, unit); }) == ErrorCode::EmptyAfterDeletion);
    }
}

TEST_CASE("entropy", "[infotheory]") {
    REQUIRE_THAT(entropy(std::vector<std::int64_t>{1, 1}), WithinAbs(1.0, 1e-15));
    REQUIRE(entropy(std::vector<std::int64_t>{4, 0, 0}) == 0.0);
    REQUIRE_THAT(entropy(std::vector<std::int64_t>{2, 1, 1}), WithinAbs(1.5, 1e-15));
    REQUIRE(code_of([] { entropy(std::vector<std::int64_t>{0, 0}); }) == ErrorCode::EmptyHistogram);
}

TEST_CASE("conditional_entropy", "[infotheory]") {
    REQUIRE_THAT(conditional_entropy(from_table({{1, 1}, {1, 1}})), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(conditional_entropy(from_table({{1, 0}, {0, 1}})), WithinAbs(0.0, 1e-15));
    const oracle::Table t{{2, 1}, {1, 0}};
    REQUIRE_THAT(conditional_entropy(from_table(t)), WithinAbs(oracle::conditional_entropy(t), 1e-14));
    SECTION("chain rule on random tables") {
        std::mt19937_64 rng(11);
        for (int r = 0; r < 200; ++r) {
            const auto j = from_table(random_table(rng));
            REQUIRE_THAT(conditional_entropy(j), WithinAbs(joint_entropy(j) - entropy(j.marginal_y()), 1e-12));
        }
    }
    JointHistogram empty;
    empty.kx = empty.ky = 2;
    empty.counts.assign(4, 0);
    REQUIRE(code_of([&] { conditional_entropy(empty); }) == ErrorCode::EmptyHistogram);
}

TEST_CASE("mutual_information", "[infotheory]") {
    SECTION("diagonal") {
        const auto r = mutual_information(from_table({{1, 0}, {0, 1}}));
        REQUIRE_THAT(r.mi_bits, WithinAbs(1.0, 1e-15));
        REQUIRE_THAT(r.nmi, WithinAbs(1.0, 1e-15));
    }
    SECTION("independent") {
        REQUIRE_THAT(mutual_information(from_table({{1, 1}, {1, 1}})).mi_bits, WithinAbs(0.0, 1e-15));
    }
    SECTION("random 4x4 against the double sum") {
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<std::int64_t> count(0, 20);
        oracle::Table t(4, std::vector<std::int64_t>(4));
        for (auto& row : t)
            for (auto& c : row) c = count(rng);
        t[1][2] += 1;
        REQUIRE_THAT(mutual_information(from_table(t)).mi_bits, WithinAbs(oracle::mi_double_sum(t), 1e-12));
    }
    SECTION("properties on random tables") {
        std::mt19937_64 rng(99);
        for (int r = 0; r < 300; ++r) {
            const auto t = random_table(rng);
            const auto j = from_table(t);
            const auto m = mutual_information(j);
            REQUIRE_THAT(m.mi_bits, WithinAbs(m.h_x_bits - m.h_x_given_y_bits, 1e-12));
            REQUIRE(m.mi_bits >= -1e-12);
            REQUIRE(m.mi_bits <= std::min(m.h_x_bits, m.h_y_bits) + 1e-12);
            REQUIRE(m.h_x_bits <= std::log2(static_cast<double>(j.kx)) + 1e-12);
            REQUIRE(m.h_y_bits <= std::log2(static_cast<double>(j.ky)) + 1e-12);
            const auto tr = mutual_information(j.transposed());
            REQUIRE_THAT(tr.mi_bits, WithinAbs(m.mi_bits, 1e-12));
            REQUIRE_THAT(m.mi_bits, WithinAbs(oracle::mi_double_sum(t), 1e-12));
        }
    }
    SECTION("zero H(X) flags degeneracy") {
        const auto r = mutual_information(from_table({{3, 5}, {0, 0}}));
        REQUIRE(r.degenerate_entropy);
        REQUIRE(r.nmi == 0.0);
    }
}

TEST_CASE("normalized_mi", "[infotheory]") {
    SECTION("self information is one") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n;
        for (int r = 0; r < 20; ++r) {
            std::vector<double> x(200 + 37 * r);
            for (auto& v : x) v = n(rng);
            REQUIRE_THAT(normalized_mi(x, x, {}).nmi, WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("independent samples sit near the shuffled floor and shrink with n") {
        double previous = 1.0;
        for (std::size_t n : {1000u, 10000u, 100000u}) {
            const auto [x, y] = synth::gen_bivariate_gaussian(0.0, n, 21);
            const auto r = normalized_mi(x, y, {FixedCount{16}, DataMinMax{}});
            const double floor = oracle::shuffled_floor(x, y, 16, 5, 8);
            REQUIRE(r.mi_bits > 0.0);
            REQUIRE(r.mi_bits < 3.0 * floor);
            REQUIRE(r.nmi < previous);
            previous = r.nmi;
        }
    }
    SECTION("gaussian rho 0.9") {
        const auto [x, y] = synth::gen_bivariate_gaussian(0.9, 100000, 5);
        const auto r = normalized_mi(x, y, {FixedCount{32}, DataMinMax{}});
        REQUIRE_THAT(r.mi_bits, WithinAbs(synth::analytic_gaussian_mi(0.9), 0.08));
    }
    SECTION("adding independent noise does not raise MI") {
        const auto [x, y] = synth::gen_bivariate_gaussian(0.8, 20000, 17);
        const auto noise = synth::gen_bivariate_gaussian(0.0, 20000, 18).first;
        std::vector<double> noisy(y);
        for (std::size_t i = 0; i < y.size(); ++i) noisy[i] += noise[i];
        const BinningSpec spec{FixedCount{20}, DataMinMax{}};
        REQUIRE(normalized_mi(x, noisy, spec).mi_bits <= normalized_mi(x, y, spec).mi_bits + 0.01);
    }
    SECTION("missing values are dropped pairwise") {
        std::vector<double> x{0, 1, 2, 3, kNaN, 5, 6, 7};
        std::vector<double> y{0, 1, kNaN, 3, 4, 5, 6, 7};
        const auto r = normalized_mi(x, y, {FixedCount{2}, DataMinMax{}});
        REQUIRE(r.n_pairs == 6);
        REQUIRE(r.n_dropped == 2);
    }
}
