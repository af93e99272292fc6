#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles are
// deliberately written from scratch here so they cannot share a code path
// with the implementation they check.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nashforest/game_engine.hpp"
#include "nashforest/indicators.hpp"
#include "nashforest/rng.hpp"
#include "nashforest/stand_model.hpp"

namespace testutil {

using namespace nashforest;

// The inventory record used as the running example: pine 70% / 59 y /
// 212 m3/ha plus birch 30% / 59 y / 66 m3/ha on 3.25 ha of fresh
// deciduous forest.
inline ForestStand example_stand() {
    ForestStand stand;
    stand.id = "12-24-1-02-109 -f";
    stand.habitat = "fresh deciduous forest";
    stand.area = 3.25;
    stand.function = StandFunction::Protective;
    stand.shares = {{"pine", 0.7, 59, 212.0}, {"birch", 0.3, 59, 66.0}};
    return stand;
}

inline std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "nashforest_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string write_temp_file(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

// Scratch aggregation oracle: plain loops, no shared code with aggregate().
inline IndicatorVector oracle_aggregate(const std::vector<StandScores>& scores,
                                        const std::vector<int>& members) {
    IndicatorVector vec;
    double shannon = 0.0, suit = 0.0;
    for (int m : members) {
        vec.x1 += scores[static_cast<size_t>(m)].lost_co2;
        shannon += scores[static_cast<size_t>(m)].shannon;
        vec.x3 += scores[static_cast<size_t>(m)].volume;
        suit += scores[static_cast<size_t>(m)].suitability;
        vec.x5 += scores[static_cast<size_t>(m)].protective_area;
    }
    vec.x2 = shannon / static_cast<double>(members.size());
    vec.x4 = suit / static_cast<double>(members.size());
    return vec;
}

// Normal-equation oracle for the through-origin quadratic: solves the 2x2
// system by Cramer's rule from first principles.
inline std::pair<double, double> oracle_quadratic(const std::array<std::pair<double, double>, 3>& pts) {
    double a2 = 0, a3 = 0, a4 = 0, av = 0, a2v = 0;
    for (const auto& [a, v] : pts) {
        a2 += a * a;
        a3 += a * a * a;
        a4 += a * a * a * a;
        av += a * v;
        a2v += a * a * v;
    }
    const double det = a2 * a4 - a3 * a3;
    return {(av * a4 - a3 * a2v) / det, (a2 * a2v - a3 * av) / det};
}

// Brute-force check that the joint profile (k,...,k) is a pure Nash
// equilibrium: scans every unilateral deviation of every player.
inline bool oracle_diagonal_is_nash(const UtilityTable& table, int k) {
    const int n = table.num_strategies();
    for (int player = 0; player < kNumPlayers; ++player) {
        for (int dev = 0; dev < n; ++dev) {
            if (table.u[static_cast<size_t>(player)][static_cast<size_t>(dev)] >
                table.u[static_cast<size_t>(player)][static_cast<size_t>(k)])
                return false;
        }
    }
    return true;
}

inline UtilityTable random_table(Rng& rng, int strategies, bool integer_ties) {
    UtilityTable table;
    for (auto& row : table.u) {
        row.resize(static_cast<size_t>(strategies));
        for (auto& cell : row)
            cell = integer_ties ? static_cast<double>(rng.uniform_int(0, 3))
                                : rng.uniform(-100.0, 100.0);
    }
    return table;
}

inline std::vector<StandScores> random_scores(Rng& rng, int n) {
    std::vector<StandScores> scores;
    scores.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        StandScores s;
        s.lost_co2 = rng.uniform(0.0, 500.0);
        s.shannon = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
        s.volume = rng.uniform(50.0, 2000.0);
        s.suitability = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.0, 1.0);
        s.protective_area = rng.uniform01() < 0.4 ? 0.0 : rng.uniform(0.5, 20.0);
        scores.push_back(s);
    }
    return scores;
}

inline bool close(double a, double b, double rel) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 || std::fabs(a - b) <= rel * scale;
}

}  // namespace testutil
