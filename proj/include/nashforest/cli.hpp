#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nashforest/simulator.hpp"

// Subcommand implementations behind the command-line front end. The CLI
// binary only parses flags and dispatches here; tests drive these directly.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.
namespace nashforest::cli {

inline constexpr const char* kVersion = "0.1.0";

struct ValidateOptions {
    std::string stands_path;
    ParseMode mode = ParseMode::Strict;
};

// Emits the validation report as JSONL on `report`.
int execute_validate(const ValidateOptions& options, std::ostream& report,
                     std::ostream& log);

struct SynthOptions {
    int n_stands = 500;
    uint64_t seed = 1;
    std::string profile = "torun-like";
    std::string out_dir;
    double h0_fraction = 0.1;  // size of the emitted initial harvest set
};

// Writes stands.csv, species_params.json, suitability.json and h0.txt.
int execute_synth(const SynthOptions& options, std::ostream& log);

struct RunOptions {
    std::string stands_path;
    std::string species_params_path;
    std::string suitability_path;
    std::string h0_path;
    std::string out_dir;
    ParseMode mode = ParseMode::Strict;
    RunConfig config;            // config.game.volume_plan <= 0 means
                                 // "default to the initial set's volume"
    int horizon_span = 10;
    int horizon_start_year = 2023;
    int threads = 0;             // 0 = hardware concurrency
};

// Full pipeline: load inputs, score, run the experiment, write
// manifest.json, trajectory.jsonl, games.jsonl, summary.json and
// selection_frequency.csv into out_dir.
int execute_run(const RunOptions& options, std::ostream& log);

struct ReportOptions {
    std::string run_dir;
    std::string stands_path;  // empty = use the path recorded in the manifest
    int bin_width = 25;
    int game = -1;            // -1 = the run's representative game
};

// Renders stats_h0.tsv, stats_hn.tsv, payoffs.tsv, histograms.csv and
// trajectory_normalized.csv from a completed run directory.
int execute_report(const ReportOptions& options, std::ostream& log);

}  // namespace nashforest::cli
