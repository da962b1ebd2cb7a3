#include "stlmine/json_io.hpp"

#include <json.hpp>

namespace stlmine {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ucb_config_json(const UcbConfig& c) {
    return ordered_json{{"n_init", c.n_init},
                        {"max_iter", c.max_iter},
                        {"delta", c.delta},
                        {"eps_stop", c.eps_stop},
                        {"k_stop", c.k_stop},
                        {"refit_every", c.refit_every}};
}

ordered_json roge_config_json(const RogeConfig& cfg) {
    return ordered_json{
        {"ne", cfg.Ne},
        {"ng", cfg.Ng},
        {"alpha", cfg.alpha},
        {"max_seed_size", cfg.s},
        {"selection", cfg.selection == SelectionMode::Roulette ? "roulette" : "trunc"},
        {"penalty_base", cfg.penalty_p},
        {"early_stop_eps", cfg.early_stop_eps},
        {"early_stop_k", cfg.early_stop_k},
        {"threads", cfg.max_threads},
        {"gpucb_light", ucb_config_json(cfg.gpucb_light)},
        {"gpucb_final", ucb_config_json(cfg.gpucb_final)}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string mining_result_json(const MiningResult& r, const RogeConfig& cfg,
                               double wall_seconds) {
    ordered_json theta = ordered_json::object();
    for (const auto& [name, value] : r.theta) theta[name] = value;
    ordered_json j{{"schema_version", kSchemaVersion},
                   {"command", "mine"},
                   {"seed", r.seed},
                   {"config", roge_config_json(cfg)},
                   {"result",
                    ordered_json{{"best_formula", r.best_formula.text()},
                                 {"raw_formula", r.raw_formula.text()},
                                 {"theta", std::move(theta)},
                                 {"g_score", r.g_score},
                                 {"fitness", r.fitness},
                                 {"calibration_shift", r.calibration},
                                 {"training_misclassification", r.training_misclassification},
                                 {"generations_run", r.generations_run},
                                 {"best_fitness_curve", r.best_fitness_curve}}},
                   {"timing", ordered_json{{"wall_seconds", wall_seconds}}}};
    return dump(j);
}

std::string cv_report_json(const CvReport& r, const RogeConfig& cfg) {
    ordered_json folds = ordered_json::array();
    for (const FoldResult& f : r.fold_results)
        folds.push_back(ordered_json{{"fold", f.fold},
                                     {"misclassification", f.misclassification},
                                     {"false_positive_rate", f.false_positive_rate},
                                     {"false_negative_rate", f.false_negative_rate},
                                     {"formula", f.formula},
                                     {"g_score", f.g_score},
                                     {"wall_seconds", f.wall_seconds}});
    ordered_json j{
        {"schema_version", kSchemaVersion},
        {"command", "cv"},
        {"seed", r.seed},
        {"folds", r.folds},
        {"config", roge_config_json(cfg)},
        {"fold_results", std::move(folds)},
        {"summary",
         ordered_json{{"mean_misclassification", r.mean_misclassification},
                      {"std_misclassification", r.std_misclassification},
                      {"mean_false_positive_rate", r.mean_false_positive_rate},
                      {"std_false_positive_rate", r.std_false_positive_rate},
                      {"mean_false_negative_rate", r.mean_false_negative_rate},
                      {"std_false_negative_rate", r.std_false_negative_rate}}},
        {"timing", ordered_json{{"total_wall_seconds", r.total_wall_seconds}}}};
    return dump(j);
}

std::string optimizer_trace_json(const std::vector<UcbRound>& history) {
    ordered_json rounds = ordered_json::array();
    for (const UcbRound& r : history)
        rounds.push_back(ordered_json{{"u", r.u},
                                      {"score", r.y},
                                      {"noise_estimate", r.noise_estimate},
                                      {"acquisition", r.acquisition},
                                      {"incumbent", r.incumbent}});
    ordered_json j{{"schema_version", kSchemaVersion},
                   {"command", "trace-opt"},
                   {"rounds", std::move(rounds)}};
    return dump(j);
}

std::string classify_json(const std::string& formula_text, const Confusion& cm) {
    ordered_json j{{"schema_version", kSchemaVersion},
                   {"command", "classify"},
                   {"formula", formula_text},
                   {"total", cm.total},
                   {"false_positives", cm.false_positives},
                   {"false_negatives", cm.false_negatives},
                   {"misclassification", cm.rate()}};
    return dump(j);
}

std::string naval_manifest_json(const NavalGenConfig& cfg, double dt,
                                const std::string& out_dir) {
    ordered_json j{{"schema_version", kSchemaVersion},
                   {"command", "gen"},
                   {"dataset", "naval"},
                   {"out", out_dir},
                   {"seed", cfg.seed},
                   {"n_normal", cfg.n_normal},
                   {"n_anomalous_red", cfg.n_anomalous_red},
                   {"n_anomalous_blue", cfg.n_anomalous_blue},
                   {"samples_per_trace", cfg.samples_per_trace},
                   {"horizon", cfg.horizon},
                   {"dt", dt},
                   {"noise_std", cfg.noise_std},
                   {"variables", ordered_json::array({"x1", "x2"})}};
    return dump(j);
}

}  // namespace stlmine
