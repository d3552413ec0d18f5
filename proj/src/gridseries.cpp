// SPDX-License-Identifier: Apache-2.0

#include "chicrit/gridseries.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "chicrit/error.hpp"

namespace chicrit::grid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    std::size_t number = 1;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = trim(text.substr(pos, nl - pos));
        if (!line.empty()) lines.push_back({number, line});
        pos = nl + 1;
        ++number;
    }
    return lines;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> optional_field(std::string_view s, std::size_t line, std::string_view name) {
    if (s.empty()) return std::nullopt;
    auto v = to_double(s);
    if (!v || !std::isfinite(*v)) parse_fail(line, "bad " + std::string(name) + " '" + std::string(s) + "'");
    return v;
}

bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NaN" || s == "nan" || s == "NA";
}

double parse_value(std::string_view s, std::size_t line) {
    if (is_missing_token(s)) return kNaN;
    auto v = to_double(s);
    if (!v || !std::isfinite(*v)) parse_fail(line, "bad value '" + std::string(s) + "'");
    if (*v < 0.0)
        throw Error(ErrorCode::NegativeValue,
                    "line " + std::to_string(line) + ": negative irradiance " + std::string(s));
    return *v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
}

int two_digits(std::string_view s, std::size_t at) {
    if (at + 2 > s.size()) return -1;
    const char a = s[at], b = s[at + 1];
    if (a < '0' || a > '9' || b < '0' || b > '9') return -1;
    return (a - '0') * 10 + (b - '0');
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

// ---- time ---------------------------------------------------------------

std::optional<std::int64_t> parse_iso8601(std::string_view s) {
    using namespace std::chrono;
    s = trim(s);
    if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
        return std::nullopt;
    const auto y = to_int(s.substr(0, 4));
    const int mo = two_digits(s, 5), d = two_digits(s, 8), h = two_digits(s, 11), mi = two_digits(s, 14);
    if (!y || mo < 1 || d < 1 || h < 0 || h > 23 || mi < 0 || mi > 59) return std::nullopt;
    std::size_t pos = 16;
    int sec = 0;
    if (pos < s.size() && s[pos] == ':') {
        sec = two_digits(s, pos + 1);
        if (sec < 0 || sec > 60) return std::nullopt;
        pos += 3;
    }
    std::int64_t offset_s = 0;
    auto rest = s.substr(pos);
    if (rest == "Z" || rest.empty()) {
        // UTC
    } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
        const int oh = two_digits(rest, 1), om = two_digits(rest, 4);
        if (oh < 0 || om < 0) return std::nullopt;
        offset_s = (oh * 3600 + om * 60) * (rest.front() == '+' ? 1 : -1);
    } else {
        return std::nullopt;
    }
    const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const auto days_since = sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days_since) * 86400 + h * 3600 + mi * 60 + sec - offset_s;
}

std::string format_iso8601(std::int64_t epoch_s) {
    using namespace std::chrono;
    const auto day_index = static_cast<std::int64_t>(std::floor(static_cast<double>(epoch_s) / 86400.0));
    const std::int64_t secs = epoch_s - day_index * 86400;
    const year_month_day ymd{sys_days{days{day_index}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(secs / 3600), static_cast<int>((secs % 3600) / 60),
                  static_cast<int>(secs % 60));
    return buf;
}

int local_hour(std::int64_t epoch_s, double utc_offset_hours) {
    const auto local = static_cast<double>(epoch_s) + utc_offset_hours * 3600.0;
    const auto hours = static_cast<std::int64_t>(std::floor(local / 3600.0));
    return static_cast<int>(((hours % 24) + 24) % 24);
}

// ---- geometry -----------------------------------------------------------

const PixelMeta* GridGeometry::find(std::int64_t pixel_id) const {
    for (const auto& p : pixels)
        if (p.pixel_id == pixel_id) return &p;
    return nullptr;
}

std::span<const double> GridSeriesSet::values(std::int64_t pixel_id) const {
    const auto it = series.find(pixel_id);
    if (it == series.end())
        throw Error(ErrorCode::UnknownPixelId, "no series for pixel " + std::to_string(pixel_id));
    return it->second;
}

double pixel_distance(const PixelMeta& a, const PixelMeta& b, DistanceMode mode) {
    if (mode == DistanceMode::Planar) {
        if (!a.has_planar() || !b.has_planar())
            throw Error(ErrorCode::MissingCoordinates,
                        "planar distance needs x_km/y_km on pixels " + std::to_string(a.pixel_id) +
                            " and " + std::to_string(b.pixel_id));
        return std::hypot(*a.x_km - *b.x_km, *a.y_km - *b.y_km);
    }
    if (!a.has_geographic() || !b.has_geographic())
        throw Error(ErrorCode::MissingCoordinates,
                    "haversine distance needs lat/lon on pixels " + std::to_string(a.pixel_id) +
                        " and " + std::to_string(b.pixel_id));
    const double phi1 = deg2rad(*a.lat_deg), phi2 = deg2rad(*b.lat_deg);
    const double dphi = phi2 - phi1;
    const double dlambda = deg2rad(*b.lon_deg - *a.lon_deg);
    const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlambda / 2.0);
    const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double infer_grid_spacing(const std::vector<PixelMeta>& pixels, DistanceMode mode) {
    if (pixels.size() < 2)
        throw Error(ErrorCode::NotEnoughPixels, "grid spacing inference needs at least 2 pixels");
    std::vector<double> nearest(pixels.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        for (std::size_t j = i + 1; j < pixels.size(); ++j) {
            const double d = pixel_distance(pixels[i], pixels[j], mode);
            if (d <= 0.0) continue;
            nearest[i] = std::min(nearest[i], d);
            nearest[j] = std::min(nearest[j], d);
        }
    }
    std::erase_if(nearest, [](double d) { return !std::isfinite(d); });
    if (nearest.empty()) throw Error(ErrorCode::DegenerateSample, "all pixels are co-located");
    auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
    std::nth_element(nearest.begin(), mid, nearest.end());
    return *mid;
}

GridGeometry parse_grid(std::string_view text, DistanceMode mode, std::optional<double> spacing_km) {
    const auto lines = split_lines(text);
    if (lines.empty()) parse_fail(1, "empty geometry file");

    const auto header = split_csv(lines.front().text);
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_id = column("pixel_id"), c_lat = column("lat_deg"), c_lon = column("lon_deg");
    if (!c_id || !c_lat || !c_lon)
        parse_fail(lines.front().number, "header must start with pixel_id,lat_deg,lon_deg");
    const auto c_x = column("x_km"), c_y = column("y_km"), c_elev = column("elevation_m");

    GridGeometry g;
    std::set<std::int64_t> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto f = split_csv(line);
        if (f.size() != header.size())
            parse_fail(number, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(f.size()));
        PixelMeta p;
        const auto id = to_int(f[*c_id]);
        if (!id) parse_fail(number, "bad pixel_id '" + std::string(f[*c_id]) + "'");
        p.pixel_id = *id;
        p.lat_deg = optional_field(f[*c_lat], number, "lat_deg");
        p.lon_deg = optional_field(f[*c_lon], number, "lon_deg");
        if (c_x) p.x_km = optional_field(f[*c_x], number, "x_km");
        if (c_y) p.y_km = optional_field(f[*c_y], number, "y_km");
        if (c_elev) p.elevation_m = optional_field(f[*c_elev], number, "elevation_m");
        if (!p.has_geographic() && !p.has_planar())
            throw Error(ErrorCode::MissingCoordinates,
                        "line " + std::to_string(number) + ": pixel " + std::to_string(p.pixel_id) +
                            " has neither lat/lon nor x/y");
        if (!seen.insert(p.pixel_id).second)
            throw Error(ErrorCode::DuplicatePixelId,
                        "line " + std::to_string(number) + ": pixel_id " + std::to_string(p.pixel_id));
        g.pixels.push_back(p);
    }
    if (g.pixels.empty()) parse_fail(lines.front().number, "geometry has no pixels");

    if (spacing_km) {
        if (!(*spacing_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be > 0");
        g.grid_spacing_km = *spacing_km;
    } else {
        g.grid_spacing_km = infer_grid_spacing(g.pixels, mode);
    }
    return g;
}

GridGeometry load_grid(const std::filesystem::path& path, DistanceMode mode,
                       std::optional<double> spacing_km) {
    return parse_grid(read_file(path), mode, spacing_km);
}

std::string format_double(double v) {
    if (std::isnan(v)) return {};
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string format_grid(const GridGeometry& g) {
    const bool planar = std::any_of(g.pixels.begin(), g.pixels.end(), [](auto& p) { return p.has_planar(); });
    const bool elev = std::any_of(g.pixels.begin(), g.pixels.end(), [](auto& p) { return p.elevation_m.has_value(); });
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };

    std::string out = "pixel_id,lat_deg,lon_deg";
    if (planar) out += ",x_km,y_km";
    if (elev) out += ",elevation_m";
    out += '\n';
    for (const auto& p : g.pixels) {
        out += std::to_string(p.pixel_id) + ',' + opt(p.lat_deg) + ',' + opt(p.lon_deg);
        if (planar) out += ',' + opt(p.x_km) + ',' + opt(p.y_km);
        if (elev) out += ',' + opt(p.elevation_m);
        out += '\n';
    }
    return out;
}

void write_grid(const std::filesystem::path& path, const GridGeometry& geometry) {
    write_file(path, format_grid(geometry));
}

// ---- series -------------------------------------------------------------

std::vector<SeriesRecord> parse_series_records(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) parse_fail(1, "empty series file");
    const auto header = split_csv(lines.front().text);
    if (header.empty() || header.front() != "timestamp")
        parse_fail(lines.front().number, "first column must be 'timestamp'");

    const bool long_form = header.size() == 3 && header[1] == "pixel_id" && header[2] == "ghi_whm2";
    std::vector<std::int64_t> wide_ids;
    if (!long_form) {
        for (std::size_t c = 1; c < header.size(); ++c) {
            const auto h = header[c];
            std::optional<std::int64_t> id;
            if (h.size() > 2 && h.substr(0, 2) == "px") id = to_int(h.substr(2));
            if (!id)
                parse_fail(lines.front().number,
                           "expected 'timestamp,pixel_id,ghi_whm2' or 'timestamp,px<id>,...'");
            wide_ids.push_back(*id);
        }
        if (wide_ids.empty()) parse_fail(lines.front().number, "wide form needs at least one px<id> column");
    }

    std::vector<SeriesRecord> records;
    records.reserve(long_form ? lines.size() : lines.size() * wide_ids.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto f = split_csv(line);
        if (f.size() != header.size())
            parse_fail(number, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(f.size()));
        const auto ts = parse_iso8601(f[0]);
        if (!ts) parse_fail(number, "bad timestamp '" + std::string(f[0]) + "'");
        if (long_form) {
            const auto id = to_int(f[1]);
            if (!id) parse_fail(number, "bad pixel_id '" + std::string(f[1]) + "'");
            records.push_back({*ts, *id, parse_value(f[2], number)});
        } else {
            for (std::size_t c = 0; c < wide_ids.size(); ++c)
                records.push_back({*ts, wide_ids[c], parse_value(f[c + 1], number)});
        }
    }
    return records;
}

std::vector<SeriesRecord> read_series_records(const std::filesystem::path& path) {
    return parse_series_records(read_file(path));
}

GridSeriesSet align_series(std::vector<SeriesRecord> records, GridGeometry geometry) {
    std::set<std::int64_t> known;
    for (const auto& p : geometry.pixels) known.insert(p.pixel_id);
    for (const auto& r : records)
        if (!known.contains(r.pixel_id))
            throw Error(ErrorCode::UnknownPixelId,
                        "pixel " + std::to_string(r.pixel_id) + " is not in the geometry");
    if (records.empty()) throw Error(ErrorCode::EmptyResult, "series file has no data rows");

    std::vector<std::int64_t> stamps;
    stamps.reserve(records.size());
    for (const auto& r : records) stamps.push_back(r.epoch_s);
    std::sort(stamps.begin(), stamps.end());
    stamps.erase(std::unique(stamps.begin(), stamps.end()), stamps.end());

    std::int64_t step = 3600;
    if (stamps.size() > 1) {
        step = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 1; i < stamps.size(); ++i) step = std::min(step, stamps[i] - stamps[i - 1]);
    }
    const std::int64_t t0 = stamps.front();
    for (auto t : stamps)
        if ((t - t0) % step != 0)
            throw Error(ErrorCode::MisalignedTimestamps,
                        format_iso8601(t) + " is off the " + std::to_string(step) + " s grid starting " +
                            format_iso8601(t0));

    const auto n = static_cast<std::size_t>((stamps.back() - t0) / step + 1);
    GridSeriesSet set;
    set.geometry = std::move(geometry);
    set.time.step_s = step;
    set.time.epoch_s.resize(n);
    for (std::size_t i = 0; i < n; ++i) set.time.epoch_s[i] = t0 + static_cast<std::int64_t>(i) * step;
    for (const auto id : known) set.series[id].assign(n, kNaN);

    std::map<std::int64_t, std::vector<bool>> filled;
    for (const auto& r : records) {
        const auto idx = static_cast<std::size_t>((r.epoch_s - t0) / step);
        auto& seen = filled[r.pixel_id];
        if (seen.empty()) seen.assign(n, false);
        if (seen[idx])
            throw Error(ErrorCode::ParseError, "duplicate row for pixel " + std::to_string(r.pixel_id) +
                                                   " at " + format_iso8601(r.epoch_s));
        seen[idx] = true;
        set.series[r.pixel_id][idx] = r.value;
    }
    return set;
}

GridSeriesSet load_series(const std::filesystem::path& path, GridGeometry geometry) {
    return align_series(read_series_records(path), std::move(geometry));
}

std::string format_series(const GridSeriesSet& set) {
    std::string out = "timestamp,pixel_id,ghi_whm2\n";
    out.reserve(out.size() + set.n_steps() * set.series.size() * 32);
    for (std::size_t t = 0; t < set.n_steps(); ++t) {
        const auto stamp = format_iso8601(set.time.epoch_s[t]);
        for (const auto& [id, values] : set.series) {
            out += stamp;
            out += ',';
            out += std::to_string(id);
            out += ',';
            out += format_double(values[t]);
            out += '\n';
        }
    }
    return out;
}

void write_series(const std::filesystem::path& path, const GridSeriesSet& set) {
    write_file(path, format_series(set));
}

GridSeriesSet filter_day_hours(const GridSeriesSet& set, const HourWindow& window) {
    if (window.start_hour < 0 || window.end_hour > 23 || window.start_hour > window.end_hour)
        throw Error(ErrorCode::InvalidArgument, "day filter needs 0 <= start <= end <= 23, got " +
                                                    std::to_string(window.start_hour) + ":" +
                                                    std::to_string(window.end_hour));
    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t < set.n_steps(); ++t) {
        const int h = local_hour(set.time.epoch_s[t], window.utc_offset_hours);
        if (h >= window.start_hour && h <= window.end_hour) keep.push_back(t);
    }
    if (keep.empty()) throw Error(ErrorCode::EmptyResult, "day filter retained no samples");

    GridSeriesSet out;
    out.geometry = set.geometry;
    out.time.step_s = set.time.step_s;
    out.time.day_filter = window;
    out.time.epoch_s.reserve(keep.size());
    for (auto t : keep) out.time.epoch_s.push_back(set.time.epoch_s[t]);
    for (const auto& [id, values] : set.series) {
        auto& dst = out.series[id];
        dst.reserve(keep.size());
        for (auto t : keep) dst.push_back(values[t]);
    }
    return out;
}

}  // namespace chicrit::grid
