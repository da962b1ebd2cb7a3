#include "stlmine/gpucb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace stlmine {

namespace {

constexpr int kCandidates = 1024;

int nth_prime(int n) {
    // n is 0-based; dimensions are small so trial division is fine
    int count = 0;
    for (int p = 2;; ++p) {
        bool prime = true;
        for (int q = 2; q * q <= p; ++q)
            if (p % q == 0) {
                prime = false;
                break;
            }
        if (prime && count++ == n) return p;
    }
}

double radical_inverse(int index, int base) {
    double inv = 1.0 / base;
    double scale = inv;
    double out = 0.0;
    while (index > 0) {
        out += (index % base) * scale;
        index /= base;
        scale *= inv;
    }
    return out;
}

double rotate01(double x, double offset) {
    double v = x + offset;
    return v - std::floor(v);
}

struct Sample {
    std::vector<double> u;
    double y = 0.0;
    double noise = 0.0;
    bool valid = false;
};

class Search {
public:
    Search(const std::function<std::pair<double, double>(const std::vector<double>&)>& score,
           int dim, const UcbConfig& cfg)
        : score_(score), dim_(dim), cfg_(cfg), rng_(split_seed(cfg.seed, 0x67705563)) {
        bases_.resize(dim);
        for (int d = 0; d < dim; ++d) bases_[d] = nth_prime(d);
        raw_candidates_.resize(dim, kCandidates);
        for (int i = 0; i < kCandidates; ++i)
            for (int d = 0; d < dim; ++d)
                raw_candidates_(d, i) = radical_inverse(i + 1, bases_[d]);
    }

    OptimizeResult run(const std::vector<std::vector<double>>& warm_starts) {
        std::vector<double> design_rot = draw_rotation();
        int design_halton = 0;
        for (int i = 0; i < cfg_.n_init && evaluations() < cfg_.max_iter; ++i) {
            std::vector<double> u;
            if (i < static_cast<int>(warm_starts.size())) {
                u = warm_starts[i];
                if (static_cast<int>(u.size()) != dim_) throw Error("warm start dimension mismatch");
                for (double& v : u) v = std::clamp(v, 0.0, 1.0);
            } else {
                u = halton_point(++design_halton, dim_, design_rot);
            }
            evaluate(u, std::numeric_limits<double>::quiet_NaN());
        }

        int streak = 0;
        while (evaluations() < cfg_.max_iter) {
            if (valid_count_ == 0) {
                // nothing to emulate yet; keep space-filling
                evaluate(halton_point(++design_halton, dim_, design_rot),
                         std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            GpModel model = fit_model();
            double beta = beta_at(evaluations() + 1);
            auto [u_next, acq] = maximize_acquisition(model, beta);
            double incumbent = best_posterior_mean(model).second;
            if (acq - incumbent < cfg_.eps_stop) {
                if (++streak >= cfg_.k_stop) break;
            } else {
                streak = 0;
            }
            evaluate(u_next, acq);
        }

        if (valid_count_ == 0) throw NoFiniteScore();
        GpModel model = fit_model();
        auto [idx, mean] = best_posterior_mean(model);
        OptimizeResult res;
        res.u_best = samples_[idx].u;
        res.estimated_best = mean;
        res.evaluations = evaluations();
        res.history = std::move(history_);
        return res;
    }

private:
    int evaluations() const { return static_cast<int>(samples_.size()); }

    double beta_at(int t) const {
        return 2.0 * std::log(double(t) * t * std::numbers::pi * std::numbers::pi /
                              (6.0 * cfg_.delta));
    }

    std::vector<double> draw_rotation() {
        std::vector<double> rot(dim_);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (double& r : rot) r = unit(rng_);
        return rot;
    }

    void evaluate(const std::vector<double>& u, double acq) {
        auto [y, noise] = score_(u);
        Sample s{u, y, noise, std::isfinite(y) && y > cfg_.fail_below};
        if (s.valid) {
            ++valid_count_;
            best_raw_ = valid_count_ == 1 ? y : std::max(best_raw_, y);
        }
        samples_.push_back(std::move(s));
        history_.push_back({u, y, noise, acq, valid_count_ > 0 ? best_raw_ : std::numeric_limits<double>::quiet_NaN()});
    }

    // Failed samples enter at a floor below every valid score with inflated
    // noise, so the emulator marks the region bad without distorting scale.
    GpModel fit_model() {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Sample& s : samples_)
            if (s.valid) {
                lo = std::min(lo, s.y);
                hi = std::max(hi, s.y);
            }
        double spread = hi - lo;
        double floor = lo - std::max(1e-2, spread);
        GpModel model(dim_);
        for (const Sample& s : samples_) {
            if (s.valid)
                model.add({s.u, s.y, s.noise});
            else
                model.add({s.u, floor, std::max(0.1 * spread, 1e-3)});
        }
        if (obs_at_last_ml_ < 0 || model.count() - obs_at_last_ml_ >= cfg_.refit_every) {
            model.fit_ml();
            obs_at_last_ml_ = model.count();
            hp_ = model.hyperparams();
        } else {
            model.fit(hp_);
        }
        return model;
    }

    std::pair<int, double> best_posterior_mean(const GpModel& model) const {
        int best = -1;
        double best_mean = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < samples_.size(); ++i) {
            if (!samples_[i].valid) continue;
            double mean = model.posterior(samples_[i].u).first;
            if (mean > best_mean) {
                best_mean = mean;
                best = static_cast<int>(i);
            }
        }
        return {best, best_mean};
    }

    std::pair<std::vector<double>, double> maximize_acquisition(const GpModel& model, double beta) {
        std::vector<double> rot = draw_rotation();
        Eigen::MatrixXd U(dim_, kCandidates);
        for (int i = 0; i < kCandidates; ++i)
            for (int d = 0; d < dim_; ++d) U(d, i) = rotate01(raw_candidates_(d, i), rot[d]);
        Eigen::VectorXd mean, var;
        model.posterior_batch(U, mean, var);
        double sb = std::sqrt(beta);
        int best = 0;
        double best_acq = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < kCandidates; ++i) {
            double acq = mean(i) + sb * std::sqrt(var(i));
            if (acq > best_acq) {
                best_acq = acq;
                best = i;
            }
        }
        std::vector<double> u(dim_);
        for (int d = 0; d < dim_; ++d) u[d] = U(d, best);
        pattern_search(model, sb, u, best_acq);
        return {u, best_acq};
    }

    void pattern_search(const GpModel& model, double sqrt_beta, std::vector<double>& u,
                        double& value) const {
        auto acq_at = [&](const std::vector<double>& q) {
            auto [m, v] = model.posterior(q);
            return m + sqrt_beta * std::sqrt(v);
        };
        double step = 0.1;
        int probes = 0;
        const int max_probes = 64 * dim_;
        while (step >= 1e-3 && probes < max_probes) {
            bool improved = false;
            for (int d = 0; d < dim_ && probes < max_probes; ++d) {
                for (double sgn : {1.0, -1.0}) {
                    std::vector<double> cand = u;
                    cand[d] = std::clamp(cand[d] + sgn * step, 0.0, 1.0);
                    if (cand[d] == u[d]) continue;
                    ++probes;
                    double v = acq_at(cand);
                    if (v > value + 1e-12) {
                        value = v;
                        u = std::move(cand);
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    const std::function<std::pair<double, double>(const std::vector<double>&)>& score_;
    int dim_;
    UcbConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<int> bases_;
    Eigen::MatrixXd raw_candidates_;
    std::vector<Sample> samples_;
    std::vector<UcbRound> history_;
    int valid_count_ = 0;
    double best_raw_ = 0.0;
    int obs_at_last_ml_ = -1;
    GpHyperparams hp_;
};

}  // namespace

std::vector<double> halton_point(int index, int dim, const std::vector<double>& rotation) {
    std::vector<double> u(dim);
    for (int d = 0; d < dim; ++d)
        u[d] = rotate01(radical_inverse(index, nth_prime(d)), d < static_cast<int>(rotation.size()) ? rotation[d] : 0.0);
    return u;
}

OptimizeResult optimize(
    const std::function<std::pair<double, double>(const std::vector<double>&)>& score, int dim,
    const UcbConfig& cfg, const std::vector<std::vector<double>>& warm_starts) {
    if (cfg.n_init < 2) throw Error("UcbConfig requires n_init >= 2");
    if (cfg.max_iter < cfg.n_init) throw Error("UcbConfig requires max_iter >= n_init");
    if (dim < 0) throw Error("optimize requires dim >= 0");
    if (dim == 0) {
        // degenerate box: a single evaluation decides everything
        std::vector<double> u;
        auto [y, noise] = score(u);
        if (!std::isfinite(y)) throw NoFiniteScore();
        OptimizeResult res;
        res.u_best = u;
        res.estimated_best = y;
        res.evaluations = 1;
        res.history.push_back({u, y, noise, std::numeric_limits<double>::quiet_NaN(), y});
        return res;
    }
    Search search(score, dim, cfg);
    return search.run(warm_starts);
}

}  // namespace stlmine
