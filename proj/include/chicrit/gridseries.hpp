// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chicrit::grid {

/// Mean Earth radius used by the haversine distance.
inline constexpr double kEarthRadiusKm = 6371.0;

enum class DistanceMode { Haversine, Planar };

struct PixelMeta {
    std::int64_t pixel_id = 0;
    std::optional<double> lat_deg;
    std::optional<double> lon_deg;
    std::optional<double> x_km;
    std::optional<double> y_km;
    std::optional<double> elevation_m;

    bool has_geographic() const { return lat_deg && lon_deg; }
    bool has_planar() const { return x_km && y_km; }
};

struct GridGeometry {
    std::vector<PixelMeta> pixels;
    double grid_spacing_km = 0.0;

    const PixelMeta* find(std::int64_t pixel_id) const;
};

/// A single uniformly sampled series. Missing samples are NaN.
struct IrradianceSeries {
    std::int64_t start_epoch_s = 0;  // UTC
    std::int64_t step_s = 3600;
    std::vector<double> values;
};

struct HourWindow {
    int start_hour = 8;
    int end_hour = 19;
    double utc_offset_hours = 1.0;
};

/// Shared time axis. Uniform at load time; after day filtering it keeps the
/// retained instants and remembers the window that produced them.
struct TimeAxis {
    std::vector<std::int64_t> epoch_s;
    std::int64_t step_s = 3600;
    std::optional<HourWindow> day_filter;
};

struct GridSeriesSet {
    GridGeometry geometry;
    TimeAxis time;
    std::map<std::int64_t, std::vector<double>> series;

    std::size_t n_steps() const { return time.epoch_s.size(); }
    std::span<const double> values(std::int64_t pixel_id) const;
};

/// One parsed row of a series file, before alignment.
struct SeriesRecord {
    std::int64_t epoch_s = 0;
    std::int64_t pixel_id = 0;
    double value = 0.0;  // NaN for an empty field
};

// ---- time helpers -------------------------------------------------------

/// Parses `YYYY-MM-DDTHH:MM[:SS][Z|+HH:MM|-HH:MM]` (a space may replace `T`).
std::optional<std::int64_t> parse_iso8601(std::string_view text);
/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(std::int64_t epoch_s);
/// Local wall-clock hour for a fixed UTC offset.
int local_hour(std::int64_t epoch_s, double utc_offset_hours);

// ---- geometry -----------------------------------------------------------

double pixel_distance(const PixelMeta& a, const PixelMeta& b, DistanceMode mode);

/// Median nearest-neighbour distance over all pixels.
double infer_grid_spacing(const std::vector<PixelMeta>& pixels, DistanceMode mode);

/// Reads a geometry CSV. When `spacing_km` is empty the spacing is inferred
/// from nearest neighbours, which needs at least two pixels.
GridGeometry load_grid(const std::filesystem::path& path, DistanceMode mode = DistanceMode::Haversine,
                       std::optional<double> spacing_km = std::nullopt);
GridGeometry parse_grid(std::string_view text, DistanceMode mode = DistanceMode::Haversine,
                        std::optional<double> spacing_km = std::nullopt);

void write_grid(const std::filesystem::path& path, const GridGeometry& geometry);
std::string format_grid(const GridGeometry& geometry);

// ---- series -------------------------------------------------------------

/// Reads long (`timestamp,pixel_id,ghi_whm2`) or wide (`timestamp,px<id>,...`)
/// series CSV into raw records. Rejects negative values.
std::vector<SeriesRecord> parse_series_records(std::string_view text);
std::vector<SeriesRecord> read_series_records(const std::filesystem::path& path);

/// Aligns records onto one uniform time axis; gaps become NaN.
GridSeriesSet align_series(std::vector<SeriesRecord> records, GridGeometry geometry);

GridSeriesSet load_series(const std::filesystem::path& path, GridGeometry geometry);

/// Long-form CSV; values are written in shortest round-trip form and
/// missing samples as empty fields.
std::string format_series(const GridSeriesSet& set);
void write_series(const std::filesystem::path& path, const GridSeriesSet& set);

/// Keeps the samples whose local hour h satisfies start <= h <= end.
GridSeriesSet filter_day_hours(const GridSeriesSet& set, const HourWindow& window);

/// Shortest round-trip decimal form; empty string for NaN.
std::string format_double(double v);

}  // namespace chicrit::grid
