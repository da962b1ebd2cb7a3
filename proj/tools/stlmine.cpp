// Command-line front end: dataset generation, mining, cross-validation,
// robustness evaluation, and classification.  Structured output is JSON with
// a schema_version field; `robust` prints a bare number.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stlmine/cross_validation.hpp"
#include "stlmine/json_io.hpp"
#include "stlmine/naval.hpp"
#include "stlmine/parser.hpp"
#include "stlmine/robustness.hpp"
#include "stlmine/roge.hpp"
#include "stlmine/util.hpp"

namespace {

using namespace stlmine;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("failed while writing " + path);
}

struct MiningOptions {
    std::string data_dir;
    RogeConfig cfg;
    std::string selection = "trunc";
    std::string out_file;
};

void add_mining_options(CLI::App* cmd, MiningOptions& o) {
    cmd->add_option("--data", o.data_dir, "dataset directory (positive/ and negative/ subdirs)")
        ->required();
    cmd->add_option("--seed", o.cfg.seed, "master RNG seed")->required();
    cmd->add_option("--ne", o.cfg.Ne, "population size (even, >= 4)")
        ->capture_default_str();
    cmd->add_option("--ng", o.cfg.Ng, "maximum generations")->capture_default_str();
    cmd->add_option("--alpha", o.cfg.alpha, "mutation probability in [0, 0.1]")
        ->capture_default_str();
    cmd->add_option("--max-size", o.cfg.s, "size cap for random seed formulae")
        ->capture_default_str();
    cmd->add_option("--selection", o.selection, "survivor selection: trunc or roulette")
        ->check(CLI::IsMember({"roulette", "trunc"}))
        ->capture_default_str();
    cmd->add_option("--ucb-init", o.cfg.gpucb_light.n_init,
                    "space-filling design size for per-candidate parameter search")
        ->capture_default_str();
    cmd->add_option("--ucb-iters", o.cfg.gpucb_light.max_iter,
                    "evaluation budget for per-candidate parameter search")
        ->capture_default_str();
    cmd->add_option("--ucb-final-init", o.cfg.gpucb_final.n_init,
                    "space-filling design size for the final refinement")
        ->capture_default_str();
    cmd->add_option("--ucb-final-iters", o.cfg.gpucb_final.max_iter,
                    "evaluation budget for the final refinement")
        ->capture_default_str();
    cmd->add_option("--threads", o.cfg.max_threads, "worker threads for scoring")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    cmd->add_option("--out", o.out_file, "also write the JSON report to this file");
}

RogeConfig finalize(const MiningOptions& o) {
    RogeConfig cfg = o.cfg;
    cfg.selection = o.selection == "trunc" ? SelectionMode::Trunc : SelectionMode::Roulette;
    return cfg;
}

void emit(const std::string& json, const std::string& out_file) {
    std::cout << json;
    if (!out_file.empty()) write_text_file(out_file, json);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal-logic classifier mining over labeled trajectories"};
    app.require_subcommand(1);

    // gen naval
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->require_subcommand(1);
    auto* naval = gen->add_subcommand("naval", "two-variable vessel trajectories");
    NavalGenConfig ncfg;
    std::string gen_out;
    naval->add_option("--out", gen_out, "output dataset directory")->required();
    naval->add_option("--seed", ncfg.seed, "master RNG seed")->required();
    naval->add_option("--normal", ncfg.n_normal, "number of normal traces")
        ->capture_default_str();
    naval->add_option("--red", ncfg.n_anomalous_red, "anomalies that dip x2 early")
        ->capture_default_str();
    naval->add_option("--blue", ncfg.n_anomalous_blue, "anomalies that never cross x1")
        ->capture_default_str();
    naval->add_option("--samples", ncfg.samples_per_trace, "samples per trace")
        ->capture_default_str();
    naval->add_option("--horizon", ncfg.horizon, "trace duration in time units")
        ->capture_default_str();
    naval->add_option("--noise", ncfg.noise_std, "Gaussian noise standard deviation")
        ->capture_default_str();

    // mine
    auto* mine_cmd = app.add_subcommand("mine", "mine a classifier from a labeled dataset");
    MiningOptions mopt;
    std::string trace_opt_file;
    add_mining_options(mine_cmd, mopt);
    mine_cmd->add_option("--trace-opt", trace_opt_file,
                         "write the final parameter-search history to this JSON file");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validate the mining pipeline");
    MiningOptions copt;
    int folds = 10;
    add_mining_options(cv_cmd, copt);
    cv_cmd->add_option("--folds", folds, "number of folds (>= 2)")->capture_default_str();

    // robust
    auto* robust_cmd = app.add_subcommand("robust", "evaluate robustness of a formula on a trace");
    std::string robust_formula, robust_trace;
    int robust_index = 0;
    robust_cmd->add_option("--formula", robust_formula, "formula text")->required();
    robust_cmd->add_option("--trace", robust_trace, "trace CSV file")->required();
    robust_cmd->add_option("--index", robust_index, "evaluation sample index")
        ->capture_default_str();

    // classify
    auto* classify_cmd =
        app.add_subcommand("classify", "apply a formula to a labeled dataset");
    std::string cls_formula, cls_data, cls_out;
    classify_cmd->add_option("--formula", cls_formula, "formula text")->required();
    classify_cmd->add_option("--data", cls_data, "dataset directory")->required();
    classify_cmd->add_option("--out", cls_out, "also write the JSON report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*naval) {
            Dataset d = generate_naval(ncfg);
            double dt = ncfg.horizon / (ncfg.samples_per_trace - 1);
            std::string manifest = naval_manifest_json(ncfg, dt, gen_out);
            save_dataset(d, gen_out, manifest);
            std::cout << manifest;
        } else if (*mine_cmd) {
            Dataset d = load_dataset(mopt.data_dir);
            RogeConfig cfg = finalize(mopt);
            auto start = std::chrono::steady_clock::now();
            MiningResult r = mine(d, cfg);
            double wall = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
            emit(mining_result_json(r, cfg, wall), mopt.out_file);
            if (!trace_opt_file.empty())
                write_text_file(trace_opt_file, optimizer_trace_json(r.refinement_history));
        } else if (*cv_cmd) {
            Dataset d = load_dataset(copt.data_dir);
            RogeConfig cfg = finalize(copt);
            CvReport report = kfold_cv(d, folds, cfg);
            emit(cv_report_json(report, cfg), copt.out_file);
        } else if (*robust_cmd) {
            Formula f = parse_formula(robust_formula);
            Trace t = load_trace_csv(robust_trace);
            std::cout << format_number(robustness(f, t, robust_index)) << "\n";
        } else if (*classify_cmd) {
            Formula f = parse_formula(cls_formula);
            Dataset d = load_dataset(cls_data);
            emit(classify_json(f.text(), confusion(f, d)), cls_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
