#include "stlmine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "stlmine/robustness.hpp"

namespace stlmine {

const Trace& Dataset::first() const {
    if (!positives.empty()) return positives.front();
    if (!negatives.empty()) return negatives.front();
    throw Error("empty dataset");
}

std::pair<double, double> Dataset::variable_range(const std::string& name) const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto scan = [&](const std::vector<Trace>& traces) {
        for (const Trace& x : traces) {
            int v = x.var_index(name);
            if (v < 0) throw Error("dataset has no variable '" + name + "'");
            for (double val : x.values[v]) {
                lo = std::min(lo, val);
                hi = std::max(hi, val);
            }
        }
    };
    scan(positives);
    scan(negatives);
    if (!(lo <= hi)) throw Error("empty dataset");
    return {lo, hi};
}

void Dataset::check() const {
    const Trace& ref = first();
    auto check_one = [&](const Trace& x) {
        x.check();
        if (x.variable_names != ref.variable_names) throw Error("dataset traces disagree on variables");
        if (x.sample_count() != ref.sample_count())
            throw Error("dataset traces disagree on sample count (" +
                        std::to_string(x.sample_count()) + " vs " +
                        std::to_string(ref.sample_count()) + ")");
        if (std::abs(x.dt - ref.dt) > 1e-6 * std::max(std::abs(ref.dt), 1.0))
            throw Error("dataset traces disagree on dt");
    };
    for (const Trace& x : positives) check_one(x);
    for (const Trace& x : negatives) check_one(x);
}

namespace {

double parse_field(const std::string& line, size_t begin, size_t end, const std::string& path,
                   int lineno) {
    double v = 0.0;
    const char* b = line.data() + begin;
    const char* e = line.data() + end;
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        throw Error(path + ":" + std::to_string(lineno) + ": malformed number '" +
                    std::string(b, e) + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

}  // namespace

Trace load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    std::vector<std::string> header = split_csv(line);
    for (auto& h : header) h = trimmed(h);
    if (header.size() < 2 || header[0] != "time")
        throw Error(path + ": header must be 'time,<var1>,...'");

    Trace x;
    x.variable_names.assign(header.begin() + 1, header.end());
    x.values.assign(x.variable_names.size(), {});

    std::vector<double> times;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        size_t start = 0;
        size_t col = 0;
        while (true) {
            size_t comma = line.find(',', start);
            size_t end = comma == std::string::npos ? line.size() : comma;
            if (col >= header.size())
                throw Error(path + ":" + std::to_string(lineno) + ": too many columns");
            double v = parse_field(line, start, end, path, lineno);
            if (col == 0)
                times.push_back(v);
            else
                x.values[col - 1].push_back(v);
            ++col;
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (col != header.size())
            throw Error(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " columns, got " + std::to_string(col));
    }
    if (times.size() < 2) throw Error(path + ": need at least 2 samples");

    x.t0 = times[0];
    x.dt = (times.back() - times.front()) / (double(times.size()) - 1.0);
    if (!(x.dt > 0)) throw Error(path + ": times must be strictly increasing");
    for (size_t j = 1; j < times.size(); ++j) {
        double step = times[j] - times[j - 1];
        if (std::abs(step - x.dt) > 1e-6 * std::max(std::abs(x.dt), 1.0))
            throw Error(path + ": non-uniform sampling at row " + std::to_string(j + 1));
    }
    x.check();
    return x;
}

namespace {

std::vector<Trace> load_class(const std::filesystem::path& dir, int label) {
    if (!std::filesystem::is_directory(dir))
        throw Error("missing dataset directory '" + dir.string() + "'");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Trace> out;
    out.reserve(files.size());
    for (const auto& f : files) {
        Trace x = load_trace_csv(f.string());
        x.label = label;
        out.push_back(std::move(x));
    }
    if (out.empty()) throw Error("no .csv traces in '" + dir.string() + "'");
    return out;
}

}  // namespace

Dataset load_dataset(const std::string& root) {
    std::filesystem::path base(root);
    Dataset d;
    d.positives = load_class(base / "positive", +1);
    d.negatives = load_class(base / "negative", -1);
    d.check();
    return d;
}

RobustnessStats robustness_stats(const Formula& f, const std::vector<Trace>& traces,
                                 int max_threads) {
    if (traces.empty()) throw Error("robustness_stats on empty trace list");
    std::vector<double> rho(traces.size());
    parallel_for(
        static_cast<int>(traces.size()),
        [&](int i) { rho[i] = robustness(f, traces[i], 0); }, max_threads);

    RobustnessStats s;
    s.n = static_cast<int>(traces.size());
    double sum = 0.0;
    for (double v : rho) {
        if (!std::isfinite(v)) s.finite = false;
        sum += v;
    }
    s.mean = sum / s.n;
    double sq = 0.0;
    for (double v : rho) {
        double d = v - s.mean;
        sq += d * d;
    }
    s.std = std::sqrt(sq / s.n);
    return s;
}

Confusion confusion(const Formula& f, const Dataset& d, int max_threads) {
    if (d.total() == 0) throw Error("misclassification on empty dataset");
    std::vector<int> errs(d.total());
    int np = static_cast<int>(d.positives.size());
    parallel_for(
        d.total(),
        [&](int i) {
            const Trace& x = i < np ? d.positives[i] : d.negatives[i - np];
            bool sat = satisfies(f, x);
            errs[i] = (i < np) ? !sat : sat;
        },
        max_threads);
    Confusion c;
    c.total = d.total();
    for (int i = 0; i < d.total(); ++i) {
        if (!errs[i]) continue;
        if (i < np)
            ++c.false_negatives;
        else
            ++c.false_positives;
    }
    return c;
}

double misclassification_rate(const Formula& f, const Dataset& d, int max_threads) {
    return confusion(f, d, max_threads).rate();
}

}  // namespace stlmine
