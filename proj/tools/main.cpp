// Command-line front end: validate / synth / run / report.

#include <iostream>

#include <CLI11.hpp>

#include "nashforest/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"nashforest - game-theoretic harvest plan optimizer"};
    app.require_subcommand(1);

    nashforest::cli::ValidateOptions validate_opts;
    bool validate_lenient = false;
    auto* validate = app.add_subcommand("validate", "check a stands CSV, report as JSONL");
    validate->add_option("stands", validate_opts.stands_path, "stands CSV file")->required();
    validate->add_flag("--lenient", validate_lenient, "accept covers off the 10% grid");

    nashforest::cli::SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "generate a synthetic inventory");
    synth->add_option("--n", synth_opts.n_stands, "number of stands (>= 20)")->required();
    synth->add_option("--seed", synth_opts.seed, "generator seed")->required();
    synth->add_option("--profile", synth_opts.profile, "torun-like | balanced");
    synth->add_option("--out-dir", synth_opts.out_dir, "output directory")->required();
    synth->add_option("--h0-fraction", synth_opts.h0_fraction,
                      "fraction of stands in the emitted initial set");

    nashforest::cli::RunOptions run_opts;
    bool run_lenient = false;
    bool no_strict_improver = false;
    auto* run = app.add_subcommand("run", "run the swap-search experiment");
    run->add_option("--stands", run_opts.stands_path, "stands CSV file")->required();
    run->add_option("--species-params", run_opts.species_params_path, "species params JSON")
        ->required();
    run->add_option("--suitability", run_opts.suitability_path, "suitability JSON")->required();
    run->add_option("--h0", run_opts.h0_path, "initial harvest set, one id per line")->required();
    run->add_option("--out-dir", run_opts.out_dir, "output directory")->required();
    run->add_option("--iterations", run_opts.config.iterations, "iterations per game");
    run->add_option("--games", run_opts.config.games, "independent games");
    run->add_option("--seed", run_opts.config.seed, "master seed")->required();
    run->add_option("--volume-plan", run_opts.config.game.volume_plan,
                    "player 3's plan in m3 (default: the initial set's volume)");
    run->add_option("--candidates", run_opts.config.game.candidates, "swap candidates per iteration");
    run->add_flag("--no-strict-improver", no_strict_improver,
                  "accept swaps that improve no player strictly");
    run->add_option("--resync-interval", run_opts.config.resync_interval,
                    "iterations between cache drift audits");
    run->add_option("--thinning", run_opts.config.trajectory_thinning,
                    "trajectory sampling stride");
    run->add_option("--horizon-span", run_opts.horizon_span, "sequestration horizon in years");
    run->add_option("--horizon-start", run_opts.horizon_start_year, "horizon start year");
    run->add_option("--threads", run_opts.threads, "worker threads (0 = all cores)");
    run->add_flag("--lenient", run_lenient, "accept covers off the 10% grid");

    nashforest::cli::ReportOptions report_opts;
    auto* report = app.add_subcommand("report", "render tables and plot data from a run");
    report->add_option("--run-dir", report_opts.run_dir, "directory written by `run`")->required();
    report->add_option("--stands", report_opts.stands_path,
                       "stands CSV (default: path recorded in the manifest)");
    report->add_option("--bin-width", report_opts.bin_width, "age histogram bin width in years");
    report->add_option("--game", report_opts.game,
                       "game index to render (default: representative game)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            validate_opts.mode = validate_lenient ? nashforest::ParseMode::Lenient
                                                  : nashforest::ParseMode::Strict;
            return nashforest::cli::execute_validate(validate_opts, std::cout, std::cerr);
        }
        if (synth->parsed()) return nashforest::cli::execute_synth(synth_opts, std::cerr);
        if (run->parsed()) {
            run_opts.mode = run_lenient ? nashforest::ParseMode::Lenient
                                        : nashforest::ParseMode::Strict;
            run_opts.config.game.strict_improver_required = !no_strict_improver;
            return nashforest::cli::execute_run(run_opts, std::cerr);
        }
        if (report->parsed()) return nashforest::cli::execute_report(report_opts, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
