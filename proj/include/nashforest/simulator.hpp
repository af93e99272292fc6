#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nashforest/game_engine.hpp"
#include "nashforest/rng.hpp"

namespace nashforest {

// The current harvest set H with its complement and the cached indicator
// vector. Stands are dataset positions. Membership updates, member draws
// and candidate draws are all O(1) (amortized).
class HarvestSet {
public:
    // `scores` must stay alive and aligned with dataset positions.
    HarvestSet(std::span<const StandScores> scores, std::span<const int> members);

    const std::vector<int>& members() const { return members_; }
    const std::vector<int>& complement() const { return complement_; }
    std::size_t size() const { return members_.size(); }
    bool contains(int stand) const { return slot_[static_cast<size_t>(stand)] >= 0; }
    const IndicatorVector& cached() const { return cached_; }

    int draw_member(Rng& rng);
    // Draws k distinct complement stands by partial Fisher-Yates; reorders
    // the complement in place. k <= complement size.
    void draw_candidates(Rng& rng, int k, std::vector<int>& out);

    // Replaces out_stand by in_stand and delta-updates the cache.
    void apply_swap(int out_stand, int in_stand);

    // Scratch re-aggregation over the current members.
    IndicatorVector recompute() const;
    // Max relative difference between cached and recomputed components.
    double drift() const;

private:
    std::span<const StandScores> scores_;
    std::vector<int> members_;
    std::vector<int> complement_;
    std::vector<int> slot_;  // member slot i -> i; complement slot i -> -(i+1)
    IndicatorVector cached_;
};

struct RunConfig {
    long iterations = 100000;
    int games = 100;
    uint64_t seed = 0;
    long resync_interval = 10000;     // iterations between cache drift audits
    long trajectory_thinning = 100;   // record every k-th iteration + acceptances
    GameConfig game;
};

struct TrajectorySample {
    long iter = 0;
    IndicatorVector vec;
    bool accepted = false;
    int out_stand = -1;  // dataset positions, set on accepted samples
    int in_stand = -1;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;  // strictly increasing iter
    long thinning = 100;
};

struct GameResult {
    int game_index = 0;
    std::vector<int> final_members;  // dataset positions
    IndicatorVector final_vec;
    Trajectory trajectory;
    long accepted_swaps = 0;
    double max_cache_drift = 0.0;  // worst relative drift seen at audits
};

struct IndicatorStats {
    IndicatorVector mean, stddev, min, max;  // across games, per component
};

struct ExperimentResult {
    std::vector<GameResult> games;      // ordered by game index
    IndicatorStats stats;
    int representative_game = 0;        // closest final payoffs to the mean
    std::vector<long> selection_count;  // per dataset position, over final sets
};

// Per-game stream: the master seed XORed with a hash of the game index.
uint64_t game_seed(uint64_t master_seed, int game_index);

// One game: `iterations` swap games from H0, accepting only diagonal Nash
// improvements. Deterministic given (config.seed, game_index).
// Throws InsufficientComplement when the complement is smaller than the
// configured candidate count.
GameResult run_game(std::span<const StandScores> scores, std::span<const int> h0,
                    const RunConfig& config, int game_index);

// `games` independent games from the same H0, optionally on several
// threads. Scheduling cannot affect results: each game has its own RNG
// stream and results are merged by game index.
ExperimentResult run_experiment(std::span<const StandScores> scores,
                                std::span<const int> h0, const RunConfig& config,
                                int threads = 0);

// One JSONL record per trajectory sample:
// {game, iter, x1_t, x2_frac, x3_m3, x4_frac, x5_ha, accepted, out_id, in_id}.
void write_trajectory_jsonl(std::ostream& out, const Dataset& dataset,
                            std::span<const GameResult> games);

}  // namespace nashforest
