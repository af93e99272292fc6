#include "nashforest/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nashforest/errors.hpp"
#include "nashforest/reporting.hpp"
#include "nashforest/synthetic.hpp"

namespace nashforest::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json note_to_json(const ValidationNote& note) {
    ordered_json record;
    record["severity"] = note.severity;
    record["id"] = note.id;
    record["message"] = note.message;
    return record;
}

ordered_json indicators_to_json(const IndicatorVector& vec) {
    ordered_json record;
    record["x1_t"] = vec.x1;
    record["x2_frac"] = vec.x2;
    record["x3_m3"] = vec.x3;
    record["x4_frac"] = vec.x4;
    record["x5_ha"] = vec.x5;
    return record;
}

IndicatorVector indicators_from_json(const json& record) {
    IndicatorVector vec;
    vec.x1 = record.at("x1_t").get<double>();
    vec.x2 = record.at("x2_frac").get<double>();
    vec.x3 = record.at("x3_m3").get<double>();
    vec.x4 = record.at("x4_frac").get<double>();
    vec.x5 = record.at("x5_ha").get<double>();
    return vec;
}

std::vector<std::string> read_id_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open id file '" + path + "'");
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        std::string id = line.substr(first, last - first + 1);
        if (id.empty() || id[0] == '#') continue;
        ids.push_back(std::move(id));
    }
    return ids;
}

std::vector<int> ids_to_positions(const Dataset& dataset, const std::vector<std::string>& ids,
                                  const char* what) {
    std::vector<int> positions;
    positions.reserve(ids.size());
    for (const auto& id : ids) {
        const int pos = dataset.position_of(id);
        if (pos < 0) throw Error(std::string(what) + ": unknown stand id '" + id + "'");
        positions.push_back(pos);
    }
    return positions;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("'" + path.string() + "': " + e.what());
    }
    return doc;
}

}  // namespace

int execute_validate(const ValidateOptions& options, std::ostream& report, std::ostream& log) {
    std::vector<ValidationNote> notes;
    try {
        const Dataset dataset = parse_stands(options.stands_path, options.mode, &notes);
        for (const auto& note : notes) report << note_to_json(note).dump() << '\n';
        log << "OK: " << dataset.stands.size() << " stands, " << notes.size() << " warning(s)\n";
        return 0;
    } catch (const Error& e) {
        for (const auto& note : notes) report << note_to_json(note).dump() << '\n';
        ValidationNote failure{"error", "", e.what()};
        report << note_to_json(failure).dump() << '\n';
        log << "FAILED: " << e.what() << '\n';
        return 1;
    }
}

int execute_synth(const SynthOptions& options, std::ostream& log) {
    try {
        const SyntheticBundle bundle =
            generate_synthetic(options.n_stands, options.seed, options.profile);
        fs::create_directories(options.out_dir);
        const fs::path dir(options.out_dir);

        write_stands(bundle.dataset, (dir / "stands.csv").string());
        save_species_params(bundle.params, (dir / "species_params.json").string());
        save_suitability(bundle.suitability, (dir / "suitability.json").string());

        const int h0_size =
            std::max(1, static_cast<int>(options.n_stands * options.h0_fraction));
        const auto h0 = select_initial_harvest(bundle.dataset, h0_size, options.seed);
        auto out = open_out(dir / "h0.txt");
        for (int pos : h0) out << bundle.dataset.stands[static_cast<size_t>(pos)].id << '\n';

        log << "wrote " << options.n_stands << " stands (" << options.profile << ", seed "
            << options.seed << ") and an initial set of " << h0_size << " to " << options.out_dir
            << '\n';
        return 0;
    } catch (const Error& e) {
        log << "synth failed: " << e.what() << '\n';
        return 2;
    }
}

int execute_run(const RunOptions& options, std::ostream& log) {
    Dataset dataset;
    SpeciesParamsMap params;
    SuitabilityMap suitability;
    std::vector<int> h0;
    std::vector<StandScores> scores;
    RunConfig config = options.config;
    const Horizon horizon{options.horizon_start_year, options.horizon_span};

    try {
        dataset = parse_stands(options.stands_path, options.mode);
        params = load_species_params(options.species_params_path);
        suitability = load_suitability(options.suitability_path);
        h0 = ids_to_positions(dataset, read_id_lines(options.h0_path), "h0");
        if (h0.empty()) throw EmptyHarvestSet("h0 file lists no stands");
        scores = score_all(dataset, params, suitability, horizon);
        if (config.game.volume_plan <= 0.0)
            config.game.volume_plan = aggregate(scores, h0).x3;  // plan = initial volume
    } catch (const Error& e) {
        log << "input validation failed: " << e.what() << '\n';
        return 1;
    }

    try {
        const ExperimentResult result = run_experiment(scores, h0, config, options.threads);
        fs::create_directories(options.out_dir);
        const fs::path dir(options.out_dir);

        ordered_json manifest;
        manifest["version"] = kVersion;
        manifest["stands"] = options.stands_path;
        manifest["species_params"] = options.species_params_path;
        manifest["suitability"] = options.suitability_path;
        manifest["h0"] = options.h0_path;
        manifest["parse_mode"] = options.mode == ParseMode::Strict ? "strict" : "lenient";
        manifest["horizon"] = {{"start_year", horizon.start_year}, {"span", horizon.span}};
        manifest["config"] = {{"iterations", config.iterations},
                              {"games", config.games},
                              {"seed", config.seed},
                              {"candidates", config.game.candidates},
                              {"strict_improver", config.game.strict_improver_required},
                              {"volume_plan", config.game.volume_plan},
                              {"resync_interval", config.resync_interval},
                              {"thinning", config.trajectory_thinning}};
        open_out(dir / "manifest.json") << manifest.dump(2) << '\n';

        {
            auto out = open_out(dir / "trajectory.jsonl");
            write_trajectory_jsonl(out, dataset, result.games);
        }

        {
            auto out = open_out(dir / "games.jsonl");
            for (const auto& game : result.games) {
                ordered_json record;
                record["game"] = game.game_index;
                record["accepted_swaps"] = game.accepted_swaps;
                record["max_cache_drift"] = game.max_cache_drift;
                record["final"] = indicators_to_json(game.final_vec);
                std::vector<std::string> members;
                members.reserve(game.final_members.size());
                for (int pos : game.final_members)
                    members.push_back(dataset.stands[static_cast<size_t>(pos)].id);
                record["members"] = members;
                out << record.dump() << '\n';
            }
        }

        const IndicatorVector initial = aggregate(scores, h0);
        long total_swaps = 0;
        double worst_drift = 0.0;
        for (const auto& game : result.games) {
            total_swaps += game.accepted_swaps;
            worst_drift = std::max(worst_drift, game.max_cache_drift);
        }

        ordered_json summary;
        summary["volume_plan"] = config.game.volume_plan;
        {
            std::vector<std::string> ids;
            ids.reserve(h0.size());
            for (int pos : h0) ids.push_back(dataset.stands[static_cast<size_t>(pos)].id);
            summary["h0"] = ids;
        }
        summary["initial"] = indicators_to_json(initial);
        summary["aggregate"] = {{"mean", indicators_to_json(result.stats.mean)},
                                {"stddev", indicators_to_json(result.stats.stddev)},
                                {"min", indicators_to_json(result.stats.min)},
                                {"max", indicators_to_json(result.stats.max)}};
        summary["representative_game"] = result.representative_game;
        summary["total_accepted_swaps"] = total_swaps;
        summary["max_cache_drift"] = worst_drift;
        {
            ordered_json gaps;
            for (const auto& [species, sp] : params)
                gaps[species] = continuity_gap_fraction(sp);
            summary["growth_fit_gap_fraction"] = gaps;
        }
        open_out(dir / "summary.json") << summary.dump(2) << '\n';

        {
            // Cross-game selection frequency, most-selected first.
            std::vector<std::pair<std::string, long>> rows;
            for (size_t pos = 0; pos < result.selection_count.size(); ++pos) {
                if (result.selection_count[pos] > 0)
                    rows.emplace_back(dataset.stands[pos].id, result.selection_count[pos]);
            }
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.second != b.second ? a.second > b.second : a.first < b.first;
            });
            auto out = open_out(dir / "selection_frequency.csv");
            out << "id,games_selected\n";
            for (const auto& [id, count] : rows) out << id << ',' << count << '\n';
        }

        const auto& rep = result.games[static_cast<size_t>(result.representative_game)];
        log << "ran " << config.games << " game(s) x " << config.iterations
            << " iterations; representative game " << result.representative_game << " accepted "
            << rep.accepted_swaps << " swaps; outputs in " << options.out_dir << '\n';
        return 0;
    } catch (const Error& e) {
        log << "run failed: " << e.what() << '\n';
        return 2;
    }
}

int execute_report(const ReportOptions& options, std::ostream& log) {
    try {
        const fs::path dir(options.run_dir);
        const json manifest = load_json(dir / "manifest.json");
        const json summary = load_json(dir / "summary.json");

        const std::string stands_path =
            !options.stands_path.empty() ? options.stands_path
                                         : manifest.at("stands").get<std::string>();
        const ParseMode mode = manifest.value("parse_mode", "strict") == std::string("lenient")
                                   ? ParseMode::Lenient
                                   : ParseMode::Strict;

        Dataset dataset;
        std::vector<int> h0;
        try {
            dataset = parse_stands(stands_path, mode);
            h0 = ids_to_positions(dataset, summary.at("h0").get<std::vector<std::string>>(), "h0");
        } catch (const Error& e) {
            log << "input validation failed: " << e.what() << '\n';
            return 1;
        }

        const int game = options.game >= 0 ? options.game
                                           : summary.at("representative_game").get<int>();
        const double volume_plan = summary.at("volume_plan").get<double>();
        const IndicatorVector initial = indicators_from_json(summary.at("initial"));

        // Final members of the selected game.
        std::vector<int> hn;
        IndicatorVector final_vec;
        {
            std::ifstream in(dir / "games.jsonl");
            if (!in) throw Error("cannot open '" + (dir / "games.jsonl").string() + "'");
            std::string line;
            bool found = false;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json record = json::parse(line);
                if (record.at("game").get<int>() != game) continue;
                hn = ids_to_positions(dataset, record.at("members").get<std::vector<std::string>>(),
                                      "games.jsonl");
                final_vec = indicators_from_json(record.at("final"));
                found = true;
                break;
            }
            if (!found) throw Error("game " + std::to_string(game) + " not found in games.jsonl");
        }

        // Trajectory of the selected game.
        Trajectory trajectory;
        {
            std::ifstream in(dir / "trajectory.jsonl");
            if (!in) throw Error("cannot open '" + (dir / "trajectory.jsonl").string() + "'");
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json record = json::parse(line);
                if (record.at("game").get<int>() != game) continue;
                TrajectorySample sample;
                sample.iter = record.at("iter").get<long>();
                sample.vec = indicators_from_json(record);
                sample.accepted = record.at("accepted").get<bool>();
                trajectory.samples.push_back(sample);
            }
        }

        auto stats_h0 = render_stats(dataset, h0);
        auto stats_hn = render_stats(dataset, hn);
        const auto [hist_before, hist_after] =
            render_histograms(dataset, h0, hn, options.bin_width);
        const NormalizedTrajectory normalized = normalize_trajectory(trajectory);

        {
            auto out = open_out(dir / "stats_h0.tsv");
            write_stats_tsv(out, stats_h0);
        }
        {
            auto out = open_out(dir / "stats_hn.tsv");
            write_stats_tsv(out, stats_hn);
        }
        {
            auto out = open_out(dir / "payoffs.tsv");
            write_payoffs_tsv(out, initial, final_vec, volume_plan);
        }
        {
            auto out = open_out(dir / "histograms.csv");
            write_histograms_csv(out, hist_before, hist_after);
        }
        {
            auto out = open_out(dir / "trajectory_normalized.csv");
            write_normalized_csv(out, normalized);
        }

        log << "reported game " << game << " into " << options.run_dir << '\n';
        return 0;
    } catch (const Error& e) {
        log << "report failed: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        log << "report failed: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace nashforest::cli
