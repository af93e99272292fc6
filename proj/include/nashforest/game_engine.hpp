#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nashforest/indicators.hpp"

namespace nashforest {

inline constexpr int kNumPlayers = 5;

// One of the 1 + candidates moves available in an iteration: keep the
// current set, or swap one member out for one non-member.
struct Strategy {
    enum class Kind { Keep, Swap };
    Kind kind = Kind::Keep;
    int index = 0;       // 0 for Keep, 1..candidates for swaps
    int out_stand = -1;  // dataset position leaving H (Swap only)
    int in_stand = -1;   // dataset position entering H (Swap only)
};

struct GameConfig {
    double volume_plan = 0.0;            // m3; player 3's utility cap, > 0
    int candidates = 10;                 // swap candidates per iteration, >= 1
    bool strict_improver_required = true;
};

// u[player][strategy]. Player order matches the indicator order; the
// utilities are (-x1, -x2, min(x3, plan), -x4, -x5).
struct UtilityTable {
    std::array<std::vector<double>, kNumPlayers> u;

    int num_strategies() const { return static_cast<int>(u[0].size()); }
};

struct GameOutcome {
    std::optional<Strategy> accepted;  // absent = keep the current set
    std::vector<int> nash_diagonal;    // ascending strategy indices k where
                                       // (k,...,k) is a pure Nash profile
    std::array<double, kNumPlayers> improvement{};  // accepted minus keep utilities
};

// One iteration's bundle: the strategies (Keep first) and their utilities.
struct SwapGame {
    std::vector<Strategy> strategies;
    UtilityTable utilities;
};

std::array<double, kNumPlayers> payoffs_from(const IndicatorVector& vec,
                                             const GameConfig& config);

// Utilities for Keep (first column) plus each candidate's indicator vector.
UtilityTable build_utilities(const IndicatorVector& keep,
                             const std::vector<IndicatorVector>& variants,
                             const GameConfig& config);

// Player i's payoff in a joint profile depends only on the variant that
// player endorses (separable model), so the diagonal profiles (k,...,k)
// that are pure Nash equilibria are exactly the strategies lying in every
// player's argmax set. Returned ascending.
std::vector<int> diagonal_nash(const UtilityTable& table);

// Test-scale oracle: enumerates all num_strategies^5 profiles and keeps
// those with no strictly improving unilateral deviation. Under the
// separable model this equals the product of per-player argmax sets.
std::vector<std::array<int, kNumPlayers>> full_nash_oracle(const UtilityTable& table);

// Acceptance rule: among diagonal Nash strategies other than Keep (and,
// by default, only those strictly better than Keep for at least one
// player), pick the one improving the most players strictly; ties go to
// the lowest strategy index. `strategies` supplies the accepted move.
GameOutcome decide(const UtilityTable& table, const GameConfig& config,
                   const std::vector<Strategy>& strategies);

}  // namespace nashforest
