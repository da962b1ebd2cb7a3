#include "stlmine/roge.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "stlmine/robustness.hpp"

namespace stlmine {

void RogeConfig::check() const {
    if (Ne < 4 || Ne % 2 != 0) throw Error("Ne must be even and at least 4");
    if (Ng < 0) throw Error("Ng must be non-negative");
    if (!(alpha >= 0.0 && alpha <= 0.1)) throw Error("mutation probability must lie in [0, 0.1]");
    if (s < 1) throw Error("max seed size must be at least 1");
    if (!(penalty_p > 0.0 && penalty_p < 1.0)) throw Error("penalty base must lie in (0, 1)");
    if (early_stop_k < 1) throw Error("early-stop window must be at least 1");
}

namespace {

bool failed_score(double g) { return !(g > kFailedDiscrimination / 2); }

double pool_g_avg(const std::vector<ScoredCandidate>& pool) {
    double sum = 0.0;
    int n = 0;
    for (const ScoredCandidate& c : pool)
        if (!failed_score(c.g_score)) {
            sum += c.g_score;
            ++n;
        }
    return n > 0 ? sum / n : 0.0;
}

// Grows from 0 toward g_avg as the formula gets larger; size 5 costs half of
// g_avg under the default base, so bigger trees pay strictly more.
double penalty_for_size(int size, double g_avg, double p) {
    return g_avg * (1.0 - std::pow(p, size));
}

}  // namespace

std::pair<double, double> discrimination(const Formula& f, const Dataset& d, int max_threads) {
    if (d.positives.empty() || d.negatives.empty())
        throw Error("discrimination requires both classes non-empty");
    RobustnessStats p = robustness_stats(f, d.positives, max_threads);
    RobustnessStats n = robustness_stats(f, d.negatives, max_threads);
    if (!p.finite || !n.finite) return {kFailedDiscrimination, 0.0};
    double denom = p.std + n.std + 1e-9;
    double g = (p.mean - n.mean) / denom;
    if (!std::isfinite(g)) return {kFailedDiscrimination, 0.0};
    double noise = std::sqrt(p.std * p.std / p.n + n.std * n.std / n.n) / denom;
    return {g, noise};
}

double size_penalty(const Formula& f, double g_avg, double p) {
    return penalty_for_size(f.size(), g_avg, p);
}

ScoredCandidate learning_parameters(const ParametricFormula& p, const Dataset& d,
                                    const ParameterSpace& space, const UcbConfig& cfg,
                                    int max_threads, OptimizeResult* opt_out) {
    if (opt_out) *opt_out = OptimizeResult{};
    auto score_theta = [&](const ParameterConfiguration& theta) {
        return discrimination(instantiate(p, theta), d, max_threads);
    };
    if (space.size() == 0) {
        auto [g, noise] = score_theta({});
        return {p, {}, g, noise, 0.0};
    }
    auto score = [&](const std::vector<double>& u) { return score_theta(from_unit_cube(u, space)); };

    // Hints left by a parent's learned configuration seed the design.
    std::vector<std::vector<double>> warm;
    {
        ParameterConfiguration hints;
        for (const Node* nd : collect_nodes(p.root())) {
            auto take = [&](const Num& v) {
                if (v.is_param() && std::isfinite(v.hint)) hints[v.param] = v.hint;
            };
            take(nd->threshold);
            take(nd->lower);
            take(nd->upper);
        }
        if (!hints.empty()) {
            ParameterConfiguration full;
            for (int i = 0; i < space.size(); ++i) {
                const ParamDim& dim = space.dim(i);
                auto it = hints.find(dim.name);
                full[dim.name] = it != hints.end() ? std::clamp(it->second, dim.lo, dim.hi)
                                                   : 0.5 * (dim.lo + dim.hi);
            }
            warm.push_back(to_unit_cube(full, space));
        }
    }

    OptimizeResult res;
    try {
        res = optimize(score, space.size(), cfg, warm);
    } catch (const NoFiniteScore&) {
        return {p, space.center(), kFailedDiscrimination, 0.0, 0.0};
    }
    if (opt_out) *opt_out = res;
    ParameterConfiguration theta = from_unit_cube(res.u_best, space);
    // the incumbent was observed, so its evaluated score is in the history
    for (const UcbRound& r : res.history)
        if (r.u == res.u_best) return {p, std::move(theta), r.y, r.noise_estimate, 0.0};
    auto [g, noise] = score_theta(theta);
    return {p, std::move(theta), g, noise, 0.0};
}

void rank_pool(std::vector<ScoredCandidate>& pool, double penalty_p) {
    double g_avg = pool_g_avg(pool);
    for (ScoredCandidate& c : pool) c.fitness = c.g_score - penalty_for_size(c.size(), g_avg, penalty_p);
    std::stable_sort(pool.begin(), pool.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        if (a.size() != b.size()) return a.size() < b.size();
        return format_tree(a.tpl.root()) < format_tree(b.tpl.root());
    });
}

std::vector<ScoredCandidate> sample(const std::vector<ScoredCandidate>& pool, int count,
                                    SelectionMode mode, std::mt19937_64& rng) {
    if (count > static_cast<int>(pool.size())) throw Error("sample count exceeds pool size");
    if (count < 0) throw Error("sample count must be non-negative");
    if (mode == SelectionMode::Trunc)
        return {pool.begin(), pool.begin() + count};

    // Dead candidates only pad the tail once everything alive is taken.
    std::vector<int> alive, dead;
    for (int i = 0; i < static_cast<int>(pool.size()); ++i)
        (failed_score(pool[i].g_score) ? dead : alive).push_back(i);

    std::vector<ScoredCandidate> out;
    out.reserve(count);
    int from_alive = std::min<int>(count, static_cast<int>(alive.size()));
    if (from_alive > 0) {
        double min_f = pool[alive.front()].fitness, max_f = min_f;
        for (int i : alive) {
            min_f = std::min(min_f, pool[i].fitness);
            max_f = std::max(max_f, pool[i].fitness);
        }
        if (max_f == min_f) {
            // all-equal fitness: deterministic truncation fallback
            for (int k = 0; k < from_alive; ++k) out.push_back(pool[alive[k]]);
        } else {
            double eps = 1e-6 * (max_f - min_f);
            std::vector<int> remaining = alive;
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (int k = 0; k < from_alive; ++k) {
                double total = 0.0;
                for (int i : remaining) total += pool[i].fitness - min_f + eps;
                double target = unit(rng) * total;
                size_t pick = remaining.size() - 1;
                double acc = 0.0;
                for (size_t m = 0; m < remaining.size(); ++m) {
                    acc += pool[remaining[m]].fitness - min_f + eps;
                    if (target <= acc) {
                        pick = m;
                        break;
                    }
                }
                out.push_back(pool[remaining[pick]]);
                remaining.erase(remaining.begin() + pick);
            }
        }
    }
    for (size_t m = 0; out.size() < static_cast<size_t>(count); ++m) out.push_back(pool[dead[m]]);
    return out;
}

namespace {

std::vector<ScoredCandidate> learn_all(const std::vector<ParametricFormula>& tpls,
                                       const Dataset& d, const RogeConfig& cfg, int gen_idx) {
    std::vector<std::optional<ScoredCandidate>> slots(tpls.size());
    parallel_for(
        static_cast<int>(tpls.size()),
        [&](int i) {
            UcbConfig ucfg = cfg.gpucb_light;
            ucfg.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(gen_idx), i);
            ScoredCandidate c =
                learning_parameters(tpls[i], d, default_space(tpls[i], d), ucfg, 1);
            c.tpl = with_hints(c.tpl, c.best_theta);
            slots[i] = std::move(c);
        },
        cfg.max_threads);
    std::vector<ScoredCandidate> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace

MiningOutcome roge(const Dataset& d, const RogeConfig& cfg) {
    cfg.check();
    d.check();
    if (d.positives.empty() || d.negatives.empty())
        throw Error("mining requires both classes non-empty");
    std::mt19937_64 rng(split_seed(cfg.seed, 0x526f6765));
    const std::vector<std::string> vars = d.first().variable_names;

    MiningOutcome out;
    std::vector<ParametricFormula> seeds = generate_initial_formulae(cfg.Ne, cfg.s, vars, rng);
    std::vector<ScoredCandidate> members = learn_all(seeds, d, cfg, 0);
    rank_pool(members, cfg.penalty_p);
    out.best_fitness_curve.push_back(members.front().fitness);
    Generation gen{std::move(members), 0};

    double best_so_far = out.best_fitness_curve.front();
    int streak = 0;
    for (int g = 1; g <= cfg.Ng; ++g) {
        std::vector<ScoredCandidate> parents = sample(gen.members, cfg.Ne / 2, cfg.selection, rng);
        std::vector<ParametricFormula> parent_tpls;
        parent_tpls.reserve(parents.size());
        for (const ScoredCandidate& c : parents) parent_tpls.push_back(c.tpl);
        std::vector<ParametricFormula> offspring =
            evolve(parent_tpls, cfg.alpha, cfg.Ne, vars, rng);
        std::vector<ScoredCandidate> scored = learn_all(offspring, d, cfg, g);

        std::vector<ScoredCandidate> merged = gen.members;
        merged.insert(merged.end(), std::make_move_iterator(scored.begin()),
                      std::make_move_iterator(scored.end()));
        double old_best_g = gen.members.front().g_score;
        int old_best_size = gen.members.front().size();
        rank_pool(merged, cfg.penalty_p);
        double old_best_refit =
            old_best_g - penalty_for_size(old_best_size, pool_g_avg(merged), cfg.penalty_p);
        if (merged.front().fitness + 1e-9 < old_best_refit)
            throw Error("merged pool lost the best candidate");

        gen.members = sample(merged, cfg.Ne, cfg.selection, rng);
        rank_pool(gen.members, cfg.penalty_p);
        gen.index = g;
        out.generations_run = g;

        double best = gen.members.front().fitness;
        out.best_fitness_curve.push_back(best);
        if (best - best_so_far < cfg.early_stop_eps)
            ++streak;
        else
            streak = 0;
        best_so_far = std::max(best_so_far, best);
        if (streak >= cfg.early_stop_k) break;
    }
    out.final_gen = std::move(gen);
    return out;
}

double calibration_alpha(const Formula& f, const Dataset& d, int max_threads) {
    int np = static_cast<int>(d.positives.size());
    int nn = static_cast<int>(d.negatives.size());
    if (np == 0 || nn == 0) throw Error("calibration requires both classes non-empty");
    std::vector<double> rp(np), rn(nn);
    parallel_for(np, [&](int i) { rp[i] = robustness(f, d.positives[i], 0); }, max_threads);
    parallel_for(nn, [&](int i) { rn[i] = robustness(f, d.negatives[i], 0); }, max_threads);

    std::vector<double> values;
    values.reserve(np + nn);
    double mean_p = 0.0, mean_n = 0.0;
    for (double v : rp) {
        if (std::isfinite(v)) values.push_back(v);
        mean_p += v / np;
    }
    for (double v : rn) {
        if (std::isfinite(v)) values.push_back(v);
        mean_n += v / nn;
    }
    if (values.empty()) return 0.0;  // nothing finite to sweep; leave the scale alone
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> sorted_p = rp, sorted_n = rn;
    std::sort(sorted_p.begin(), sorted_p.end());
    std::sort(sorted_n.begin(), sorted_n.end());
    auto errors_at = [&](double alpha) {
        // misclassified: positives with rho <= alpha, negatives with rho > alpha
        int pos_err = static_cast<int>(std::upper_bound(sorted_p.begin(), sorted_p.end(), alpha) -
                                       sorted_p.begin());
        int neg_err = nn - static_cast<int>(std::upper_bound(sorted_n.begin(), sorted_n.end(),
                                                             alpha) -
                                            sorted_n.begin());
        return pos_err + neg_err;
    };

    std::vector<double> candidates;
    candidates.push_back(values.front() - 1.0);  // "everything satisfies" sentinel
    candidates.insert(candidates.end(), values.begin(), values.end());

    int min_err = np + nn + 1;
    for (double a : candidates) min_err = std::min(min_err, errors_at(a));

    if (min_err == 0) {
        // alpha may move freely between consecutive observed values; take the
        // midpoint of the widest interval with zero error
        double best_alpha = 0.0, best_width = -1.0;
        for (size_t i = 0; i + 1 < candidates.size(); ++i) {
            if (errors_at(candidates[i]) != 0) continue;
            double width = candidates[i + 1] - candidates[i];
            if (width > best_width) {
                best_width = width;
                best_alpha = 0.5 * (candidates[i] + candidates[i + 1]);
            }
        }
        return best_alpha;
    }
    double target = std::isfinite(mean_p) && std::isfinite(mean_n) ? 0.5 * (mean_p + mean_n) : 0.0;
    double best_alpha = candidates.front();
    double best_dist = std::numeric_limits<double>::infinity();
    for (double a : candidates) {
        if (errors_at(a) != min_err) continue;
        double dist = std::abs(a - target);
        if (dist < best_dist) {
            best_dist = dist;
            best_alpha = a;
        }
    }
    return best_alpha;
}

Formula calibrate(const Formula& f, const Dataset& d, int max_threads) {
    return shift(nnf(f), calibration_alpha(f, d, max_threads));
}

MiningResult mine(const Dataset& d, const RogeConfig& cfg) {
    MiningOutcome out = roge(d, cfg);

    const ScoredCandidate* best = &out.final_gen.members.front();
    for (const ScoredCandidate& c : out.final_gen.members)
        if (c.g_score > best->g_score) best = &c;

    UcbConfig fcfg = cfg.gpucb_final;
    fcfg.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(out.generations_run) + 1, 0xF14A1);
    ParametricFormula tpl = with_hints(best->tpl, best->best_theta);
    OptimizeResult refinement;
    ScoredCandidate refined = learning_parameters(tpl, d, default_space(tpl, d), fcfg,
                                                  cfg.max_threads, &refinement);
    ScoredCandidate chosen = refined.g_score >= best->g_score ? std::move(refined) : *best;
    chosen.fitness = chosen.g_score -
                     penalty_for_size(chosen.size(), pool_g_avg(out.final_gen.members), cfg.penalty_p);

    Formula raw = chosen.instantiated();
    double alpha = calibration_alpha(raw, d, cfg.max_threads);
    Formula calibrated = shift(nnf(raw), alpha);
    double mis = misclassification_rate(calibrated, d, cfg.max_threads);
    return MiningResult{std::move(calibrated),
                        std::move(raw),
                        std::move(chosen.best_theta),
                        chosen.g_score,
                        chosen.fitness,
                        alpha,
                        mis,
                        out.generations_run,
                        cfg.seed,
                        std::move(out.best_fitness_curve),
                        std::move(refinement.history)};
}

}  // namespace stlmine
