// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "chicrit/error.hpp"
#include "chicrit/gridseries.hpp"
#include "chicrit/synth.hpp"

using namespace chicrit;
using namespace chicrit::grid;
using Catch::Matchers::WithinAbs;

namespace {

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

const char* kThreePixels =
    "pixel_id,lat_deg,lon_deg\n"
    "1,41.90,8.70\n"
    "2,41.92,8.70\n"
    "3,41.90,8.73\n";

std::string hourly_long(int pixels, int hours, std::int64_t start = 1104537600) {
    std::string s = "timestamp,pixel_id,ghi_whm2\n";
    for (int h = 0; h < hours; ++h)
        for (int p = 1; p <= pixels; ++p)
            s += format_iso8601(start + 3600 * h) + "," + std::to_string(p) + "," + std::to_string(10 * h + p) + "\n";
    return s;
}

}  // namespace

TEST_CASE("iso8601", "[gridseries]") {
    REQUIRE(parse_iso8601("2005-01-01T00:00:00Z") == 1104537600);
    REQUIRE(parse_iso8601("2005-01-01 01:00") == 1104537600 + 3600);
    REQUIRE(parse_iso8601("2005-01-01T02:00:00+01:00") == 1104537600 + 3600);
    REQUIRE(parse_iso8601("2005-01-01T00:00:00-00:30") == 1104537600 + 1800);
    REQUIRE_FALSE(parse_iso8601("2005-13-01T00:00:00Z"));
    REQUIRE_FALSE(parse_iso8601("yesterday"));
    REQUIRE(format_iso8601(1104537600) == "2005-01-01T00:00:00Z");
    REQUIRE(local_hour(1104537600, 1.0) == 1);
    REQUIRE(local_hour(1104537600, -1.0) == 23);
}

TEST_CASE("load_grid", "[gridseries]") {
    SECTION("three pixels with lat/lon") {
        const auto g = parse_grid(kThreePixels);
        REQUIRE(g.pixels.size() == 3);
        REQUIRE(g.find(2)->lat_deg == 41.92);
        REQUIRE(g.grid_spacing_km > 0.0);
    }
    SECTION("duplicate id") {
        REQUIRE(code_of([] { parse_grid("pixel_id,lat_deg,lon_deg\n7,41,8\n7,42,8\n"); }) ==
                ErrorCode::DuplicatePixelId);
    }
    SECTION("empty file") { REQUIRE(code_of([] { parse_grid(""); }) == ErrorCode::ParseError); }
    SECTION("malformed row names its line") {
        try {
            parse_grid("pixel_id,lat_deg,lon_deg\n1,41,8\n2,abc,8\n");
            FAIL();
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::ParseError);
            REQUIRE(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SECTION("no coordinates") {
        REQUIRE(code_of([] { parse_grid("pixel_id,lat_deg,lon_deg\n1,,\n2,41,8\n"); }) ==
                ErrorCode::MissingCoordinates);
    }
    SECTION("explicit spacing overrides inference") {
        REQUIRE(parse_grid(kThreePixels, DistanceMode::Haversine, 2.5).grid_spacing_km == 2.5);
    }
    SECTION("missing file") { REQUIRE(code_of([] { load_grid("/nonexistent/grid.csv"); }) == ErrorCode::Io); }
    SECTION("format round trip") {
        const auto g = synth::make_grid(3, 2, 2.5);
        const auto text = format_grid(g);
        REQUIRE(format_grid(parse_grid(text, DistanceMode::Planar)) == text);
    }
}

TEST_CASE("pixel_distance", "[gridseries]") {
    PixelMeta a{1, 0.0, 0.0, 0.0, 0.0, {}};
    PixelMeta b{2, 0.0, 1.0, 3.0, 4.0, {}};
    REQUIRE(pixel_distance(a, a, DistanceMode::Haversine) == 0.0);
    REQUIRE(pixel_distance(a, b, DistanceMode::Planar) == 5.0);
    REQUIRE_THAT(pixel_distance(a, b, DistanceMode::Haversine), WithinAbs(111.19, 0.1));
    REQUIRE_THAT(pixel_distance(a, b, DistanceMode::Haversine),
                 WithinAbs(2.0 * std::numbers::pi * kEarthRadiusKm / 360.0, 1e-9));
    PixelMeta bare{3, {}, {}, {}, {}, {}};
    REQUIRE(code_of([&] { pixel_distance(a, bare, DistanceMode::Planar); }) == ErrorCode::MissingCoordinates);

    SECTION("metric properties over a grid") {
        const auto g = synth::make_grid(5, 4, 2.5);
        for (auto mode : {DistanceMode::Haversine, DistanceMode::Planar})
            for (const auto& p : g.pixels)
                for (const auto& q : g.pixels) {
                    const double d = pixel_distance(p, q, mode);
                    REQUIRE(d >= 0.0);
                    REQUIRE(d == pixel_distance(q, p, mode));
                    if (p.pixel_id == q.pixel_id) REQUIRE(d < 1e-9);
                    else REQUIRE(d > 1e-9);
                }
    }
    SECTION("planar and haversine agree at grid scale") {
        const auto g = synth::make_grid(4, 4, 2.5);
        REQUIRE_THAT(infer_grid_spacing(g.pixels, DistanceMode::Haversine), WithinAbs(2.5, 0.01));
        REQUIRE(infer_grid_spacing(g.pixels, DistanceMode::Planar) == 2.5);
    }
}

TEST_CASE("load_series", "[gridseries]") {
    const auto geometry = parse_grid(kThreePixels);
    SECTION("two pixels, 24 hourly rows each") {
        const auto set = align_series(parse_series_records(hourly_long(2, 24)), geometry);
        REQUIRE(set.n_steps() == 24);
        REQUIRE(set.time.step_s == 3600);
        REQUIRE(set.values(1).size() == 24);
        REQUIRE(set.values(2)[5] == 52.0);
        // pixel 3 is in the geometry but absent from the file
        REQUIRE(std::isnan(set.values(3)[0]));
    }
    SECTION("unknown pixel") {
        auto text = hourly_long(2, 3) + "2005-01-01T03:00:00Z,99,1.0\n";
        REQUIRE(code_of([&] { align_series(parse_series_records(text), geometry); }) == ErrorCode::UnknownPixelId);
    }
    SECTION("negative value") {
        REQUIRE(code_of([] { parse_series_records("timestamp,pixel_id,ghi_whm2\n2005-01-01T00:00:00Z,1,-5.0\n"); }) ==
                ErrorCode::NegativeValue);
    }
    SECTION("gaps become missing markers") {
        const std::string text =
            "timestamp,pixel_id,ghi_whm2\n"
            "2005-01-01T00:00:00Z,1,1\n"
            "2005-01-01T01:00:00Z,1,\n"
            "2005-01-01T03:00:00Z,1,NA\n"
            "2005-01-01T04:00:00Z,1,4\n";
        const auto set = align_series(parse_series_records(text), geometry);
        REQUIRE(set.n_steps() == 5);
        const auto v = set.values(1);
        REQUIRE(v[0] == 1.0);
        REQUIRE(std::isnan(v[1]));
        REQUIRE(std::isnan(v[2]));
        REQUIRE(std::isnan(v[3]));
        REQUIRE(v[4] == 4.0);
    }
    SECTION("off-grid timestamp") {
        const std::string text =
            "timestamp,pixel_id,ghi_whm2\n"
            "2005-01-01T00:00:00Z,1,1\n"
            "2005-01-01T01:00:00Z,1,1\n"
            "2005-01-01T02:30:00Z,1,1\n";
        REQUIRE(code_of([&] { align_series(parse_series_records(text), geometry); }) ==
                ErrorCode::MisalignedTimestamps);
    }
    SECTION("wide form matches long form") {
        const std::string wide =
            "timestamp,px1,px2\n"
            "2005-01-01T00:00:00Z,1.5,2\n"
            "2005-01-01T01:00:00Z,,4\n";
        const std::string longf =
            "timestamp,pixel_id,ghi_whm2\n"
            "2005-01-01T00:00:00Z,1,1.5\n"
            "2005-01-01T00:00:00Z,2,2\n"
            "2005-01-01T01:00:00Z,2,4\n";
        REQUIRE(format_series(align_series(parse_series_records(wide), geometry)) ==
                format_series(align_series(parse_series_records(longf), geometry)));
    }
    SECTION("round trip is bit exact") {
        synth::SpatialGenSpec spec;
        spec.nx = 3;
        spec.ny = 2;
        spec.n_steps = 50;
        spec.seed = 9;
        auto set = synth::gen_spatial_field(spec);
        set.series[4][7] = std::numeric_limits<double>::quiet_NaN();
        const auto text = format_series(set);
        const auto back = align_series(parse_series_records(text), set.geometry);
        REQUIRE(format_series(back) == text);
        for (const auto& [id, values] : set.series)
            for (std::size_t t = 0; t < values.size(); ++t) {
                if (std::isnan(values[t])) REQUIRE(std::isnan(back.values(id)[t]));
                else REQUIRE(back.values(id)[t] == values[t]);
            }
    }
    SECTION("through files") {
        const auto dir = std::filesystem::temp_directory_path() / "chicrit_gridseries_test";
        std::filesystem::create_directories(dir);
        const auto g = synth::make_grid(2, 2, 2.5);
        write_grid(dir / "grid.csv", g);
        {
            std::ofstream(dir / "series.csv") << hourly_long(4, 6);
        }
        const auto set = load_series(dir / "series.csv", load_grid(dir / "grid.csv", DistanceMode::Planar));
        REQUIRE(set.series.size() == 4);
        REQUIRE(set.n_steps() == 6);
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("filter_day_hours", "[gridseries]") {
    const auto geometry = parse_grid(kThreePixels);
    const auto set = align_series(parse_series_records(hourly_long(1, 48)), geometry);
    SECTION("8 to 19 keeps 12 per day") {
        const auto f = filter_day_hours(set, {8, 19, 1.0});
        REQUIRE(f.n_steps() == 24);
        REQUIRE(f.time.day_filter.has_value());
        for (auto t : f.time.epoch_s) {
            const int h = local_hour(t, 1.0);
            REQUIRE((h >= 8 && h <= 19));
        }
        SECTION("idempotent") {
            const auto ff = filter_day_hours(f, {8, 19, 1.0});
            REQUIRE(ff.time.epoch_s == f.time.epoch_s);
            REQUIRE(format_series(ff) == format_series(f));
        }
    }
    SECTION("0 to 23 is the identity") {
        const auto f = filter_day_hours(set, {0, 23, 1.0});
        REQUIRE(f.time.epoch_s == set.time.epoch_s);
        REQUIRE(format_series(f) == format_series(set));
    }
    SECTION("reversed window") {
        REQUIRE(code_of([&] { filter_day_hours(set, {3, 2, 1.0}); }) == ErrorCode::InvalidArgument);
    }
    SECTION("nothing retained") {
        const auto short_set = align_series(parse_series_records(hourly_long(1, 3)), geometry);
        REQUIRE(code_of([&] { filter_day_hours(short_set, {12, 13, 0.0}); }) == ErrorCode::EmptyResult);
    }
}

TEST_CASE("format_double", "[gridseries]") {
    REQUIRE(format_double(0.1) == "0.1");
    REQUIRE(format_double(std::numeric_limits<double>::quiet_NaN()).empty());
    const double x = 1.0 / 3.0;
    REQUIRE(std::stod(format_double(x)) == x);
}
