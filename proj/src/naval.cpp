#include "stlmine/naval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "stlmine/formula.hpp"
#include "stlmine/robustness.hpp"
#include "stlmine/util.hpp"

namespace stlmine {
namespace {

constexpr double kX1Threshold = 31.65;
constexpr double kX2Threshold = 22.46;
constexpr double kWindowLo = 49.0;
constexpr double kWindowHi = 287.0;
// Geometric clearance kept between every deterministic path and the two
// thresholds. noise_std is capped in NavalGenConfig::check() so this stays
// at least three noise standard deviations.
constexpr double kMargin = 4.0;

enum class TraceKind { Normal, Red, Blue };

// 0 before a, 1 after b, cubic ease in between.
double ramp(double t, double a, double b) {
    if (b <= a) return t >= b ? 1.0 : 0.0;
    double u = std::clamp((t - a) / (b - a), 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

double mix(double a, double b, double s) { return a + (b - a) * s; }

Formula reference_classifier() {
    auto left = make_atom("x2", Relation::Greater, Num{kX2Threshold});
    auto right = make_atom("x1", Relation::LessEqual, Num{kX1Threshold});
    return Formula(make_until(Num{kWindowLo}, Num{kWindowHi}, left, right));
}

struct PathSpec {
    // x1: holds near `x1_start`, then eases toward `x1_end` over [x1_a, x1_b].
    double x1_start = 0.0, x1_end = 0.0, x1_a = 0.0, x1_b = 0.0;
    // x2: follows `x2_base + x2_drift * t / horizon`, optionally blended down
    // to `dip_floor` over [dip_a, dip_b] and back up over [rise_a, rise_b].
    double x2_base = 0.0, x2_drift = 0.0;
    bool has_dip = false;
    double dip_floor = 0.0, dip_a = 0.0, dip_b = 0.0;
    bool has_rise = false;
    double rise_a = 0.0, rise_b = 0.0;

    double x1_at(double t) const {
        return mix(x1_start, x1_end, ramp(t, x1_a, x1_b));
    }
    double x2_at(double t, double horizon) const {
        double base = x2_base + x2_drift * (t / horizon);
        if (!has_dip) return base;
        double v = mix(base, dip_floor, ramp(t, dip_a, dip_b));
        if (has_rise) v = mix(v, base, ramp(t, rise_a, rise_b));
        return v;
    }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// First grid time at which `pred` holds, or a negative value if none does.
template <typename Pred>
double first_grid_time(double dt, int n, Pred pred) {
    for (int j = 0; j < n; ++j) {
        double t = j * dt;
        if (pred(t)) return t;
    }
    return -1.0;
}

// Draws deterministic path parameters for one trace. Returns false when the
// draw violates its own geometric requirements and should be retried.
bool draw_spec(TraceKind kind, double dt, int n, double horizon,
               std::mt19937_64& rng, PathSpec& spec) {
    spec = PathSpec{};
    spec.x1_start = uniform(rng, 58.0, 72.0);
    spec.x2_base = uniform(rng, 29.0, 36.0);
    spec.x2_drift = uniform(rng, -2.0, 0.0);

    switch (kind) {
        case TraceKind::Normal: {
            spec.x1_end = uniform(rng, 16.0, 24.0);
            spec.x1_a = uniform(rng, 20.0, 100.0);
            spec.x1_b = std::min(spec.x1_a + uniform(rng, 60.0, 150.0), 280.0);
            if (spec.x1_b - spec.x1_a < 40.0) return false;
            double cross = first_grid_time(dt, n, [&](double t) {
                return spec.x1_at(t) <= kX1Threshold - kMargin;
            });
            if (cross < kWindowLo + dt || cross > kWindowHi - 2.0 * dt) return false;
            // Optionally steer toward the dock (x2 falls) once safely past the
            // crossing, so x2 alone does not separate the classes.
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                spec.has_dip = true;
                spec.dip_a = cross + uniform(rng, 15.0, 50.0);
                spec.dip_b = spec.dip_a + uniform(rng, 25.0, 60.0);
                spec.dip_floor = uniform(rng, 10.0, 18.0);
                if (spec.dip_a + 10.0 >= horizon) spec.has_dip = false;
            }
            return true;
        }
        case TraceKind::Red: {
            spec.has_dip = true;
            spec.dip_a = uniform(rng, 60.0, 150.0);
            spec.dip_b = spec.dip_a + uniform(rng, 20.0, 50.0);
            spec.dip_floor = uniform(rng, 13.0, 17.5);
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                spec.has_rise = true;
                spec.rise_a = spec.dip_b + uniform(rng, 20.0, 70.0);
                spec.rise_b = spec.rise_a + uniform(rng, 20.0, 50.0);
            }
            double low = first_grid_time(dt, n, [&](double t) {
                return spec.x2_at(t, horizon) <= kX2Threshold - kMargin;
            });
            if (low < 0.0) return false;
            double start_turn = low + uniform(rng, 20.0, 60.0);
            if (uniform(rng, 0.0, 1.0) < 0.6 && start_turn <= 260.0) {
                // Late crossing: x1 only starts falling after x2 has dipped.
                spec.x1_end = uniform(rng, 16.0, 24.0);
                spec.x1_a = start_turn;
                spec.x1_b = spec.x1_a + uniform(rng, 60.0, 140.0);
            } else {
                // Never approaches the crossing threshold.
                spec.x1_end = uniform(rng, 45.0, 60.0);
                spec.x1_a = uniform(rng, 30.0, 120.0);
                spec.x1_b = spec.x1_a + uniform(rng, 80.0, 160.0);
            }
            return true;
        }
        case TraceKind::Blue: {
            spec.x1_end = uniform(rng, 38.0, 48.0);
            spec.x1_a = uniform(rng, 30.0, 180.0);
            spec.x1_b = spec.x1_a + uniform(rng, 60.0, 120.0);
            return true;
        }
    }
    return false;
}

Trace sample_trace(const PathSpec& spec, TraceKind kind, double dt, int n,
                   double horizon, double noise_std, std::mt19937_64& rng) {
    Trace trace;
    trace.t0 = 0.0;
    trace.dt = dt;
    trace.variable_names = {"x1", "x2"};
    trace.label = kind == TraceKind::Normal ? 1 : -1;
    trace.values.assign(2, std::vector<double>(static_cast<std::size_t>(n)));
    std::normal_distribution<double> noise(0.0, noise_std);
    for (int j = 0; j < n; ++j) {
        double t = j * dt;
        double e1 = noise_std > 0.0 ? noise(rng) : 0.0;
        double e2 = noise_std > 0.0 ? noise(rng) : 0.0;
        trace.values[0][static_cast<std::size_t>(j)] = spec.x1_at(t) + e1;
        trace.values[1][static_cast<std::size_t>(j)] = spec.x2_at(t, horizon) + e2;
    }
    return trace;
}

// Class-specific sanity predicate evaluated on the noisy samples.
bool class_property_holds(const Trace& trace, TraceKind kind) {
    const auto& x1 = trace.values[0];
    const auto& x2 = trace.values[1];
    std::size_t n = x1.size();
    auto first_x1_cross = [&]() -> std::size_t {
        for (std::size_t j = 0; j < n; ++j)
            if (x1[j] <= kX1Threshold) return j;
        return n;
    };
    auto first_x2_dip = [&]() -> std::size_t {
        for (std::size_t j = 0; j < n; ++j)
            if (x2[j] <= kX2Threshold) return j;
        return n;
    };
    switch (kind) {
        case TraceKind::Normal:
            return true;  // covered by the robustness sign check
        case TraceKind::Red: {
            std::size_t dip = first_x2_dip();
            return dip < n && dip < first_x1_cross();
        }
        case TraceKind::Blue:
            return first_x1_cross() == n && first_x2_dip() == n;
    }
    return false;
}

Trace generate_one(TraceKind kind, const NavalGenConfig& cfg, double dt,
                   const Formula& classifier, std::mt19937_64& rng) {
    int n = cfg.samples_per_trace;
    for (int attempt = 0; attempt < 500; ++attempt) {
        PathSpec spec;
        if (!draw_spec(kind, dt, n, cfg.horizon, rng, spec)) continue;
        Trace trace =
            sample_trace(spec, kind, dt, n, cfg.horizon, cfg.noise_std, rng);
        double rho = robustness(classifier, trace, 0);
        bool want_positive = kind == TraceKind::Normal;
        if (want_positive ? rho <= 0.0 : rho >= 0.0) continue;
        if (!class_property_holds(trace, kind)) continue;
        return trace;
    }
    throw Error("trajectory generation failed: could not produce a separable "
                "trace after 500 attempts; lower noise_std");
}

}  // namespace

void NavalGenConfig::check() const {
    if (n_normal < 1) throw Error("n_normal must be at least 1");
    if (n_anomalous_red < 0 || n_anomalous_blue < 0)
        throw Error("anomaly counts must be non-negative");
    if (n_anomalous_red + n_anomalous_blue < 1)
        throw Error("need at least one anomalous trace");
    if (samples_per_trace < 31)
        throw Error("samples_per_trace must be at least 31");
    if (!(horizon >= 290.0))
        throw Error("horizon must be at least 290 so the crossing window fits");
    if (!(noise_std >= 0.0 && noise_std <= kMargin / 3.0))
        throw Error("noise_std must be in [0, " + format_number(kMargin / 3.0) +
                    "] to preserve class separation margins");
}

Dataset generate_naval(const NavalGenConfig& cfg) {
    cfg.check();
    double dt = cfg.horizon / (cfg.samples_per_trace - 1);
    Formula classifier = reference_classifier();
    std::mt19937_64 rng(cfg.seed);

    Dataset d;
    d.positives.reserve(static_cast<std::size_t>(cfg.n_normal));
    d.negatives.reserve(
        static_cast<std::size_t>(cfg.n_anomalous_red + cfg.n_anomalous_blue));
    for (int i = 0; i < cfg.n_normal; ++i)
        d.positives.push_back(
            generate_one(TraceKind::Normal, cfg, dt, classifier, rng));
    for (int i = 0; i < cfg.n_anomalous_red; ++i)
        d.negatives.push_back(
            generate_one(TraceKind::Red, cfg, dt, classifier, rng));
    for (int i = 0; i < cfg.n_anomalous_blue; ++i)
        d.negatives.push_back(
            generate_one(TraceKind::Blue, cfg, dt, classifier, rng));
    d.check();

    // Final guard: the reference classifier must separate the classes.
    for (const Trace& t : d.positives)
        if (!(robustness(classifier, t, 0) > 0.0))
            throw Error("generation sanity check failed on a normal trace");
    for (const Trace& t : d.negatives)
        if (!(robustness(classifier, t, 0) < 0.0))
            throw Error("generation sanity check failed on an anomalous trace");
    return d;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "time";
    for (const auto& name : trace.variable_names) out << ',' << name;
    out << '\n';
    for (int j = 0; j < trace.sample_count(); ++j) {
        out << format_number(trace.time_at(j));
        for (const auto& column : trace.values)
            out << ',' << format_number(column[static_cast<std::size_t>(j)]);
        out << '\n';
    }
    if (!out) throw Error("failed while writing " + path);
}

void save_dataset(const Dataset& d, const std::string& root,
                  const std::string& manifest_json) {
    namespace fs = std::filesystem;
    fs::path base(root);
    std::error_code ec;
    fs::create_directories(base / "positive", ec);
    if (ec) throw Error("cannot create " + (base / "positive").string());
    fs::create_directories(base / "negative", ec);
    if (ec) throw Error("cannot create " + (base / "negative").string());

    auto write_class = [&](const std::vector<Trace>& traces,
                           const fs::path& dir) {
        for (std::size_t i = 0; i < traces.size(); ++i) {
            std::ostringstream name;
            name << "trace_";
            name.width(6);
            name.fill('0');
            name << i;
            name << ".csv";
            write_trace_csv(traces[i], (dir / name.str()).string());
        }
    };
    write_class(d.positives, base / "positive");
    write_class(d.negatives, base / "negative");

    if (!manifest_json.empty()) {
        std::ofstream out(base / "manifest.json", std::ios::binary);
        if (!out) throw Error("cannot write manifest.json");
        out << manifest_json;
        if (manifest_json.back() != '\n') out << '\n';
    }
}

}  // namespace stlmine
