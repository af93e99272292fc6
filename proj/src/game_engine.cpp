#include "nashforest/game_engine.hpp"

#include <algorithm>
#include <limits>

namespace nashforest {

std::array<double, kNumPlayers> payoffs_from(const IndicatorVector& vec,
                                             const GameConfig& config) {
    // Player 3 does not gain from harvesting beyond the plan: every
    // at-or-above-plan volume has the same utility.
    return {-vec.x1, -vec.x2, std::min(vec.x3, config.volume_plan), -vec.x4, -vec.x5};
}

UtilityTable build_utilities(const IndicatorVector& keep,
                             const std::vector<IndicatorVector>& variants,
                             const GameConfig& config) {
    UtilityTable table;
    const size_t n = 1 + variants.size();
    for (auto& row : table.u) row.resize(n);
    const auto fill = [&table](size_t k, const std::array<double, kNumPlayers>& p) {
        for (int i = 0; i < kNumPlayers; ++i) table.u[static_cast<size_t>(i)][k] = p[static_cast<size_t>(i)];
    };
    fill(0, payoffs_from(keep, config));
    for (size_t v = 0; v < variants.size(); ++v) fill(v + 1, payoffs_from(variants[v], config));
    return table;
}

std::vector<int> diagonal_nash(const UtilityTable& table) {
    const int n = table.num_strategies();
    std::array<double, kNumPlayers> best;
    for (int i = 0; i < kNumPlayers; ++i) {
        const auto& row = table.u[static_cast<size_t>(i)];
        best[static_cast<size_t>(i)] = *std::max_element(row.begin(), row.end());
    }
    // (k,...,k) is a pure Nash profile iff k is a weakly-best response for
    // every player, i.e. k lies in all five argmax sets.
    std::vector<int> diagonal;
    for (int k = 0; k < n; ++k) {
        bool common = true;
        for (int i = 0; i < kNumPlayers && common; ++i)
            common = table.u[static_cast<size_t>(i)][static_cast<size_t>(k)] >= best[static_cast<size_t>(i)];
        if (common) diagonal.push_back(k);
    }
    return diagonal;
}

std::vector<std::array<int, kNumPlayers>> full_nash_oracle(const UtilityTable& table) {
    const int n = table.num_strategies();
    std::vector<std::array<int, kNumPlayers>> equilibria;
    std::array<int, kNumPlayers> profile{};
    for (;;) {
        // No player may gain by a unilateral deviation. Payoffs are
        // separable, so only the deviating player's own column matters.
        bool is_nash = true;
        for (int i = 0; i < kNumPlayers && is_nash; ++i) {
            const auto& row = table.u[static_cast<size_t>(i)];
            const double own = row[static_cast<size_t>(profile[static_cast<size_t>(i)])];
            for (int t = 0; t < n; ++t) {
                if (row[static_cast<size_t>(t)] > own) {
                    is_nash = false;
                    break;
                }
            }
        }
        if (is_nash) equilibria.push_back(profile);

        int pos = kNumPlayers - 1;
        while (pos >= 0 && ++profile[static_cast<size_t>(pos)] == n) {
            profile[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return equilibria;
}

GameOutcome decide(const UtilityTable& table, const GameConfig& config,
                   const std::vector<Strategy>& strategies) {
    GameOutcome outcome;
    outcome.nash_diagonal = diagonal_nash(table);

    int best_index = -1;
    int best_improvers = -1;
    for (int k : outcome.nash_diagonal) {
        if (k == 0) continue;  // keeping the set is never an "acceptance"
        int improvers = 0;
        for (int i = 0; i < kNumPlayers; ++i) {
            if (table.u[static_cast<size_t>(i)][static_cast<size_t>(k)] >
                table.u[static_cast<size_t>(i)][0])
                ++improvers;
        }
        if (config.strict_improver_required && improvers == 0) continue;
        if (improvers > best_improvers) {  // ties keep the lowest index
            best_improvers = improvers;
            best_index = k;
        }
    }

    if (best_index >= 0) {
        outcome.accepted = strategies[static_cast<size_t>(best_index)];
        for (int i = 0; i < kNumPlayers; ++i)
            outcome.improvement[static_cast<size_t>(i)] =
                table.u[static_cast<size_t>(i)][static_cast<size_t>(best_index)] -
                table.u[static_cast<size_t>(i)][0];
    }
    return outcome;
}

}  // namespace nashforest
