// SPDX-License-Identifier: Apache-2.0

#include "chicrit/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "chicrit/criterion.hpp"
#include "chicrit/error.hpp"
#include "chicrit/gridseries.hpp"
#include "chicrit/infotheory.hpp"
#include "chicrit/spatial.hpp"
#include "chicrit/synth.hpp"
#include "chicrit/temporal.hpp"

namespace chicrit::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// ---- flag values --------------------------------------------------------

struct AnalysisFlags {
    std::string grid_path;
    std::string series_path;
    int horizon = 1;
    std::string day_filter;  // "HH:HH", empty = none
    double utc_offset = 1.0;
    std::string tau_source = "full";
    std::string bins = "sturges";
    std::string bin_range;  // "lo:hi", empty = data min/max
    double chi_low = 0.9;
    double chi_high = 1.1;
    std::string pairs = "all";
    std::optional<std::uint64_t> seed;
    std::string tau_policy = "end";
    std::string distance = "haversine";
    std::optional<double> spacing;
    int max_lag = 24;
    double tol = 0.005;
    std::size_t min_samples = 100;
    bool strict = false;
    std::string out_dir = ".";
    unsigned threads = 0;
};

struct SynthFlags {
    std::string spatial = "12x12";
    double spacing = 2.5;
    double corr_length = 5.0;
    int steps = 5000;
    std::optional<std::uint64_t> seed;
    std::string preset;
    bool diurnal = false;
    double sunrise = 6.0;
    double sunset = 18.0;
    double ar_phi = 0.8;
    double noise_sigma = 0.15;
    std::string out_dir = ".";
};

struct ValidateFlags {
    std::string est_path;
    std::string meas_path;
    std::string out_dir = ".";
};

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::Usage, what); }

std::pair<double, double> split_pair(const std::string& text, char sep, const std::string& flag) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) usage(flag + " expects A" + sep + "B, got '" + text + "'");
    try {
        std::size_t used_a = 0, used_b = 0;
        const double a = std::stod(text.substr(0, pos), &used_a);
        const double b = std::stod(text.substr(pos + 1), &used_b);
        if (used_a != pos || used_b != text.size() - pos - 1) throw std::invalid_argument(text);
        return {a, b};
    } catch (const std::logic_error&) {
        usage(flag + " expects A" + sep + "B, got '" + text + "'");
    }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CHI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            usage(std::string("CHI_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

info::BinningSpec parse_binning(const AnalysisFlags& f) {
    info::BinningSpec spec;
    if (f.bins == "sturges") {
        spec.rule = info::Sturges{};
    } else if (f.bins == "fd" || f.bins == "freedman-diaconis") {
        spec.rule = info::FreedmanDiaconis{};
    } else {
        std::string n = f.bins.rfind("fixed:", 0) == 0 ? f.bins.substr(6) : f.bins;
        try {
            std::size_t used = 0;
            const int k = std::stoi(n, &used);
            if (used != n.size()) throw std::invalid_argument(n);
            spec.rule = info::FixedCount{k};
        } catch (const std::logic_error&) {
            usage("--bins expects sturges, fd or fixed:N, got '" + f.bins + "'");
        }
    }
    if (!f.bin_range.empty()) {
        const auto [lo, hi] = split_pair(f.bin_range, ':', "--bin-range");
        spec.range = info::ExplicitRange{lo, hi};
    }
    return spec;
}

std::optional<grid::HourWindow> parse_day_filter(const AnalysisFlags& f) {
    if (f.day_filter.empty()) return std::nullopt;
    const auto [start, end] = split_pair(f.day_filter, ':', "--day-filter");
    if (start != std::floor(start) || end != std::floor(end)) usage("--day-filter hours must be integers");
    return grid::HourWindow{static_cast<int>(start), static_cast<int>(end), f.utc_offset};
}

spatial::PairSampling parse_pairs(const AnalysisFlags& f, std::uint64_t seed) {
    if (f.pairs == "all") return spatial::AllPairs{};
    if (f.pairs.rfind("random:", 0) == 0) {
        try {
            const auto m = std::stoull(f.pairs.substr(7));
            if (m == 0) throw std::invalid_argument("0");
            return spatial::RandomPairs{m, seed};
        } catch (const std::logic_error&) {
        }
    }
    usage("--pairs expects all or random:M, got '" + f.pairs + "'");
}

temporal::TauPolicy parse_policy(const std::string& s) {
    if (s == "start") return temporal::TauPolicy::PlateauStart;
    if (s == "end") return temporal::TauPolicy::PlateauEnd;
    if (s == "mid") return temporal::TauPolicy::Midpoint;
    usage("--tau-policy expects start, end or mid, got '" + s + "'");
}

grid::DistanceMode parse_distance(const std::string& s) {
    if (s == "haversine") return grid::DistanceMode::Haversine;
    if (s == "planar") return grid::DistanceMode::Planar;
    usage("--distance expects haversine or planar, got '" + s + "'");
}

// ---- output helpers -----------------------------------------------------

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
}

std::string curve_csv(const std::vector<spatial::CurvePoint>& pts) {
    std::string s = "distance_km,nmi,pair_count\n";
    for (const auto& p : pts) s += fmt(p.distance_km) + ',' + fmt(p.nmi) + ',' + std::to_string(p.pair_count) + '\n';
    return s;
}

std::string fit_json(const spatial::ExpDecayFit& fit) {
    using criterion::round_significant;
    Json j{{"a", round_significant(fit.a)},       {"b", round_significant(fit.b)},
           {"c", round_significant(fit.c)},       {"rss", round_significant(fit.rss)},
           {"iterations", fit.iterations}, {"converged", fit.converged}};
    return j.dump(2) + "\n";
}

std::string auto_mi_csv(const temporal::AutoMICurve& c) {
    std::string s = "lag,mi_bits,nmi\n";
    for (std::size_t k = 0; k < c.lags.size(); ++k)
        s += std::to_string(c.lags[k]) + ',' + fmt(c.mi_bits[k]) + ',' + fmt(c.nmi[k]) + '\n';
    return s;
}

std::string tau_csv(const temporal::TauStats& st) {
    std::string s = "pixel_id,plateau_start,plateau_end,tau\n";
    for (const auto& r : st.per_pixel)
        s += std::to_string(r.pixel_id) + ',' + std::to_string(r.plateau_start) + ',' +
             std::to_string(r.plateau_end) + ',' + fmt(r.tau) + '\n';
    return s;
}

std::string tau_stats_json(const temporal::TauStats& st) {
    using criterion::round_significant;
    Json j{{"median", round_significant(st.median)}, {"min", round_significant(st.min)},
           {"max", round_significant(st.max)},       {"mean", round_significant(st.mean)},
           {"std", round_significant(st.std)},       {"n_pixels", st.per_pixel.size()},
           {"n_no_minimum", st.n_no_minimum}};
    return j.dump(2) + "\n";
}

std::string pixel_curve_name(std::int64_t id) { return "temporal/pixel_" + std::to_string(id) + ".csv"; }

// ---- analysis pipeline shared by analyze and curves ----------------------

struct Pipeline {
    grid::GridSeriesSet full;
    std::optional<grid::GridSeriesSet> filtered;
    info::BinningSpec binning;
    std::uint64_t seed = 0;
    spatial::SpatialMICurve curve;
    spatial::ExpDecayFit fit;
    temporal::TauStats tau;
    std::vector<temporal::AutoMICurve> auto_curves;
    Json config;
};

Pipeline run_pipeline(const AnalysisFlags& f) {
    if (f.horizon < 1) usage("--horizon must be >= 1");
    if (f.tau_source != "full" && f.tau_source != "filtered")
        usage("--tau-source expects full or filtered, got '" + f.tau_source + "'");
    const auto distance = parse_distance(f.distance);
    const auto policy = parse_policy(f.tau_policy);
    const auto window = parse_day_filter(f);
    if (f.tau_source == "filtered" && !window) usage("--tau-source filtered needs --day-filter");

    Pipeline p;
    p.seed = resolve_seed(f.seed);
    p.binning = parse_binning(f);
    const auto sampling = parse_pairs(f, p.seed);
    const criterion::ChiThresholds thresholds{f.chi_low, f.chi_high};
    criterion::classify(1.0, thresholds);  // validates the band

    p.full = grid::load_series(f.series_path, grid::load_grid(f.grid_path, distance, f.spacing));
    if (window) p.filtered = grid::filter_day_hours(p.full, *window);

    spatial::PairwiseOptions popt;
    popt.distance = distance;
    popt.min_samples = f.min_samples;
    popt.threads = f.threads;
    p.curve = spatial::pairwise_nmi(p.full, p.binning, sampling, popt);
    p.fit = spatial::fit_exp_decay(p.curve);

    temporal::TauOptions topt;
    topt.max_lag = f.max_lag;
    topt.tol = f.tol;
    topt.policy = policy;
    topt.auto_mi.min_pairs = f.min_samples;
    topt.threads = f.threads;
    const auto& tau_set = f.tau_source == "filtered" ? *p.filtered : p.full;
    p.tau = temporal::tau_statistics(tau_set, p.binning, topt, &p.auto_curves);

    Json binning;
    binning["rule"] = f.bins;
    if (const auto* r = std::get_if<info::ExplicitRange>(&p.binning.range))
        binning["range"] = {r->lo, r->hi};
    else
        binning["range"] = "data_min_max";

    p.config["grid"] = f.grid_path;
    p.config["series"] = f.series_path;
    p.config["horizon_steps"] = f.horizon;
    p.config["day_filter"] = window ? Json{{"start_hour", window->start_hour},
                                           {"end_hour", window->end_hour},
                                           {"utc_offset_hours", window->utc_offset_hours}}
                                    : Json(nullptr);
    p.config["tau_source"] = f.tau_source;
    p.config["binning"] = binning;
    p.config["distance"] = f.distance;
    p.config["grid_spacing_km"] = criterion::round_significant(p.full.geometry.grid_spacing_km);
    p.config["spacing_source"] = f.spacing ? "flag" : "nearest_neighbour_median";
    p.config["pairs"] = p.curve.sampling;
    p.config["seed"] = p.seed;
    p.config["min_samples"] = f.min_samples;
    p.config["tau_policy"] = f.tau_policy;
    p.config["tol_bits"] = f.tol;
    p.config["max_lag"] = f.max_lag;
    p.config["thresholds"] = {{"low", f.chi_low}, {"high", f.chi_high}};
    return p;
}

void write_curves(const Pipeline& p, const fs::path& out) {
    write_text(out / "spatial_curve.csv", curve_csv(p.curve.points()));
    write_text(out / "spatial_curve_binned.csv",
               curve_csv(spatial::bin_by_distance(p.curve, p.full.geometry.grid_spacing_km)));
    write_text(out / "spatial_fit.json", fit_json(p.fit));
    for (const auto& c : p.auto_curves) write_text(out / pixel_curve_name(c.pixel_id), auto_mi_csv(c));
    write_text(out / "tau_per_pixel.csv", tau_csv(p.tau));
    write_text(out / "tau_stats.json", tau_stats_json(p.tau));
}

// ---- subcommands --------------------------------------------------------

int cmd_analyze(const AnalysisFlags& f, std::ostream& out) {
    const auto p = run_pipeline(f);
    const fs::path dir = f.out_dir;
    write_curves(p, dir);

    criterion::ReportInputs in;
    in.dataset = criterion::describe(p.full);
    in.config = p.config;
    in.fit = p.fit;
    in.delta = spatial::extract_delta(p.fit, p.full.geometry.grid_spacing_km);
    in.tau = p.tau;
    in.horizon_steps = f.horizon;
    in.thresholds = {f.chi_low, f.chi_high};
    in.artifacts = {{"spatial_curve", "spatial_curve.csv"},
                    {"spatial_curve_binned", "spatial_curve_binned.csv"},
                    {"spatial_fit", "spatial_fit.json"},
                    {"temporal_curves", "temporal/pixel_<id>.csv"},
                    {"tau_per_pixel", "tau_per_pixel.csv"},
                    {"tau_stats", "tau_stats.json"}};
    in.notes.push_back(std::to_string(p.curve.pairs.size()) + " pixel pairs fitted; " +
                       std::to_string(p.curve.n_skipped_sample_floor) + " below the sample floor, " +
                       std::to_string(p.curve.n_skipped_degenerate) + " degenerate, " +
                       std::to_string(p.curve.n_skipped_colocated) + " co-located");
    in.notes.push_back(std::to_string(p.curve.n_asymmetric) +
                       " pairs with nMI orientations differing by more than 0.05");
    if (p.filtered && f.tau_source == "full")
        in.notes.push_back("day filter retained " + std::to_string(p.filtered->n_steps()) + " of " +
                           std::to_string(p.full.n_steps()) +
                           " steps; tau measured on the unfiltered series (--tau-source filtered to change)");
    const auto report = criterion::build_report(in);
    write_text(dir / "report.json", criterion::to_json(report));

    const auto& chi = report.chi;
    out << "dataset  " << report.dataset.fingerprint << " (" << report.dataset.n_pixels << " pixels, "
        << report.dataset.n_steps << " steps, spacing " << fmt(report.dataset.grid_spacing_km) << " km)\n";
    out << "delta    " << fmt(report.delta.delta_km) << " km = " << fmt(report.delta.delta_pixels)
        << " pixel (fit a=" << fmt(p.fit.a) << " b=" << fmt(p.fit.b) << " c=" << fmt(p.fit.c) << ")\n";
    out << "tau      median " << fmt(p.tau.median) << " (min " << fmt(p.tau.min) << ", max " << fmt(p.tau.max)
        << ", mean " << fmt(p.tau.mean) << ", std " << fmt(p.tau.std) << ") over " << p.tau.per_pixel.size()
        << " pixels, " << p.tau.n_no_minimum << " without a minimum\n";
    out << "horizon  " << f.horizon << " steps, tau_eff " << fmt(chi.tau_eff) << "\n";
    out << "chi      " << fmt(chi.chi) << ' ' << criterion::kChiUnits << " [indeterminate band " << fmt(f.chi_low)
        << ".." << fmt(f.chi_high) << "]\n";
    out << "report   " << (dir / "report.json").string() << "\n";
    out << criterion::to_token(chi.classification) << "\n";

    if (f.strict && chi.classification == criterion::Classification::Indeterminate) return kExitIndeterminate;
    return kExitOk;
}

int cmd_curves(const AnalysisFlags& f, std::ostream& out) {
    const auto p = run_pipeline(f);
    const fs::path dir = f.out_dir;
    write_curves(p, dir);
    const double d_max = p.curve.pairs.back().distance_km;
    std::string fitted = "distance_km,nmi\n";
    for (const auto& pt : spatial::sample_fit(p.fit, d_max, 200)) fitted += fmt(pt.distance_km) + ',' + fmt(pt.nmi) + '\n';
    write_text(dir / "spatial_fit_curve.csv", fitted);
    out << "wrote spatial curve (" << p.curve.pairs.size() << " pairs), fitted curve (200 points) and "
        << p.auto_curves.size() << " temporal curves to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_synth(const SynthFlags& f, std::ostream& out) {
    synth::SpatialGenSpec spec;
    int nx = 0, ny = 0;
    {
        const auto x = f.spatial.find('x');
        try {
            if (x == std::string::npos) throw std::invalid_argument(f.spatial);
            nx = std::stoi(f.spatial.substr(0, x));
            ny = std::stoi(f.spatial.substr(x + 1));
        } catch (const std::logic_error&) {
            usage("--spatial expects NXxNY, got '" + f.spatial + "'");
        }
    }
    spec.nx = nx;
    spec.ny = ny;
    spec.spacing_km = f.spacing;
    spec.corr_length_km = f.corr_length;
    spec.n_steps = f.steps;
    spec.seed = resolve_seed(f.seed);
    if (f.diurnal) {
        synth::TemporalGenSpec d;
        d.sunrise_hour = f.sunrise;
        d.sunset_hour = f.sunset;
        d.ar_phi = f.ar_phi;
        d.noise_sigma = f.noise_sigma;
        spec.diurnal = d;
    }

    const auto set = synth::gen_spatial_field(spec);
    const fs::path dir = f.out_dir;
    fs::create_directories(dir);
    grid::write_grid(dir / "grid.csv", set.geometry);
    grid::write_series(dir / "series.csv", set);
    out << "grid     " << (dir / "grid.csv").string() << "\n";
    out << "series   " << (dir / "series.csv").string() << "\n";
    out << "fingerprint " << criterion::fingerprint(set) << "\n";
    return kExitOk;
}

int cmd_validate(const ValidateFlags& f, std::ostream& out) {
    const auto est = grid::read_series_records(f.est_path);
    const auto meas = grid::read_series_records(f.meas_path);
    std::map<std::pair<std::int64_t, std::int64_t>, double> by_key;
    for (const auto& r : meas) by_key[{r.epoch_s, r.pixel_id}] = r.value;
    std::vector<double> e, m;
    for (const auto& r : est) {
        const auto it = by_key.find({r.epoch_s, r.pixel_id});
        if (it == by_key.end()) continue;
        e.push_back(r.value);
        m.push_back(it->second);
    }
    if (e.empty()) throw Error(ErrorCode::NoOverlap, "estimate and measurement share no (timestamp, pixel) keys");

    const auto scores = criterion::validate(e, m);
    Json j{{"nmbe_pct", criterion::round_significant(scores.nmbe_pct)},
           {"nrmse_pct", criterion::round_significant(scores.nrmse_pct)},
           {"n", scores.n}};
    write_text(fs::path(f.out_dir) / "validation.json", j.dump(2) + "\n");
    out << "nMBE  " << fmt(scores.nmbe_pct) << " %\n";
    out << "nRMSE " << fmt(scores.nrmse_pct) << " %\n";
    out << "n     " << scores.n << "\n";
    return kExitOk;
}

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
    cmd->add_option("--grid", f.grid_path, "Geometry CSV")->required();
    cmd->add_option("--series", f.series_path, "Series CSV (long or wide form)")->required();
    cmd->add_option("--horizon", f.horizon, "Forecast horizon in steps")->capture_default_str();
    cmd->add_option("--day-filter", f.day_filter, "Keep local hours HH:HH (inclusive)");
    cmd->add_option("--utc-offset", f.utc_offset, "Fixed UTC offset for local hours")->capture_default_str();
    cmd->add_option("--tau-source", f.tau_source, "Series used for tau: full or filtered")->capture_default_str();
    cmd->add_option("--bins", f.bins, "sturges, fd or fixed:N")->capture_default_str();
    cmd->add_option("--bin-range", f.bin_range, "Explicit histogram range lo:hi");
    cmd->add_option("--chi-low", f.chi_low, "Lower edge of the indeterminate band")->capture_default_str();
    cmd->add_option("--chi-high", f.chi_high, "Upper edge of the indeterminate band")->capture_default_str();
    cmd->add_option("--pairs", f.pairs, "all or random:M")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Seed for pair sampling (fallback: CHI_SEED)");
    cmd->add_option("--tau-policy", f.tau_policy, "start, end or mid of the first-minimum plateau")->capture_default_str();
    cmd->add_option("--distance", f.distance, "haversine or planar")->capture_default_str();
    cmd->add_option("--spacing", f.spacing, "Grid spacing in km (default: inferred)");
    cmd->add_option("--max-lag", f.max_lag, "Largest lag for auto-MI")->capture_default_str();
    cmd->add_option("--tol", f.tol, "First-minimum tolerance in bits")->capture_default_str();
    cmd->add_option("--min-samples", f.min_samples, "Co-present sample floor per pair or lag")->capture_default_str();
    cmd->add_option("--out-dir", f.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads, 0 = auto")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spatial/temporal decorrelation criterion for choosing between stochastic and NWP forecasting"};
    app.name("chicrit");
    app.require_subcommand(1);

    AnalysisFlags analyze_flags;
    auto* analyze = app.add_subcommand("analyze", "Estimate delta, tau and chi and classify");
    add_analysis_flags(analyze, analyze_flags);
    analyze->add_flag("--strict", analyze_flags.strict, "Exit 2 when chi falls in the indeterminate band");

    AnalysisFlags curve_flags;
    auto* curves = app.add_subcommand("curves", "Write the spatial and temporal MI curves only");
    add_analysis_flags(curves, curve_flags);

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
    synth_cmd->add_option("--spatial", synth_flags.spatial, "Grid size NXxNY")->capture_default_str();
    synth_cmd->add_option("--spacing", synth_flags.spacing, "Grid spacing in km")->capture_default_str();
    synth_cmd->add_option("--corr-length", synth_flags.corr_length, "Exponential kernel length in km")->capture_default_str();
    synth_cmd->add_option("--steps", synth_flags.steps, "Number of hourly steps")->capture_default_str();
    synth_cmd->add_option("--seed", synth_flags.seed, "Generator seed (fallback: CHI_SEED)");
    synth_cmd->add_option("--preset", synth_flags.preset, "hourly-grid: diurnal field with tau 7 and delta near 1 pixel");
    synth_cmd->add_flag("--diurnal", synth_flags.diurnal, "Drive a diurnal clear-sky series with the field");
    synth_cmd->add_option("--sunrise", synth_flags.sunrise, "Local sunrise hour")->capture_default_str();
    synth_cmd->add_option("--sunset", synth_flags.sunset, "Local sunset hour")->capture_default_str();
    synth_cmd->add_option("--ar-phi", synth_flags.ar_phi, "AR(1) coefficient of the clear-sky index")->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth_flags.noise_sigma, "Std of the clear-sky index anomaly")->capture_default_str();
    synth_cmd->add_option("--out-dir", synth_flags.out_dir, "Output directory")->capture_default_str();

    ValidateFlags validate_flags;
    auto* validate_cmd = app.add_subcommand("validate", "nMBE and nRMSE of an estimate against measurements");
    validate_cmd->add_option("--est", validate_flags.est_path, "Estimated series CSV")->required();
    validate_cmd->add_option("--meas", validate_flags.meas_path, "Measured series CSV")->required();
    validate_cmd->add_option("--out-dir", validate_flags.out_dir, "Output directory")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << to_string(ErrorCode::Usage) << ": " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_flags, out);
        if (*curves) return cmd_curves(curve_flags, out);
        if (*synth_cmd) {
            if (synth_flags.preset == "hourly-grid") {
                // 2.5 km grid whose per-pixel auto-MI first minimum sits at lag 7
                // and whose nMI decay length is about one pixel
                synth_flags.diurnal = true;
                synth_flags.spacing = 2.5;
                synth_flags.corr_length = 3.0;
                synth_flags.sunrise = 4.5;
                synth_flags.sunset = 20.0;
                synth_flags.ar_phi = 0.95;
                synth_flags.noise_sigma = 0.5;
            } else if (!synth_flags.preset.empty()) {
                usage("unknown preset '" + synth_flags.preset + "'");
            }
            return cmd_synth(synth_flags, out);
        }
        if (*validate_cmd) return cmd_validate(validate_flags, out);
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << to_string(ErrorCode::Io) << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: E_INTERNAL: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace chicrit::cli
