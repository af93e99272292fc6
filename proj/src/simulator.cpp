#include "nashforest/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nashforest/errors.hpp"

namespace nashforest {

HarvestSet::HarvestSet(std::span<const StandScores> scores, std::span<const int> members)
    : scores_(scores) {
    const int total = static_cast<int>(scores.size());
    slot_.assign(static_cast<size_t>(total), 0);
    std::vector<char> in_set(static_cast<size_t>(total), 0);
    members_.reserve(members.size());
    for (int m : members) {
        if (m < 0 || m >= total) throw Error("harvest set member out of range");
        if (in_set[static_cast<size_t>(m)])
            throw Error("harvest set lists stand position " + std::to_string(m) + " twice");
        in_set[static_cast<size_t>(m)] = 1;
        slot_[static_cast<size_t>(m)] = static_cast<int>(members_.size());
        members_.push_back(m);
    }
    complement_.reserve(static_cast<size_t>(total) - members_.size());
    for (int s = 0; s < total; ++s) {
        if (!in_set[static_cast<size_t>(s)]) {
            slot_[static_cast<size_t>(s)] = -static_cast<int>(complement_.size()) - 1;
            complement_.push_back(s);
        }
    }
    cached_ = aggregate(scores_, members_);
}

int HarvestSet::draw_member(Rng& rng) {
    return members_[rng.bounded(members_.size())];
}

void HarvestSet::draw_candidates(Rng& rng, int k, std::vector<int>& out) {
    const size_t m = complement_.size();
    out.resize(static_cast<size_t>(k));
    for (size_t j = 0; j < static_cast<size_t>(k); ++j) {
        const size_t r = j + rng.bounded(m - j);
        if (r != j) {
            std::swap(complement_[j], complement_[r]);
            slot_[static_cast<size_t>(complement_[j])] = -static_cast<int>(j) - 1;
            slot_[static_cast<size_t>(complement_[r])] = -static_cast<int>(r) - 1;
        }
        out[j] = complement_[j];
    }
}

void HarvestSet::apply_swap(int out_stand, int in_stand) {
    const int member_slot = slot_[static_cast<size_t>(out_stand)];
    const int complement_slot = -slot_[static_cast<size_t>(in_stand)] - 1;
    members_[static_cast<size_t>(member_slot)] = in_stand;
    complement_[static_cast<size_t>(complement_slot)] = out_stand;
    slot_[static_cast<size_t>(in_stand)] = member_slot;
    slot_[static_cast<size_t>(out_stand)] = -complement_slot - 1;
    cached_ = apply_swap_delta(cached_, scores_[static_cast<size_t>(out_stand)],
                               scores_[static_cast<size_t>(in_stand)], members_.size());
}

IndicatorVector HarvestSet::recompute() const {
    return aggregate(scores_, members_);
}

double HarvestSet::drift() const {
    const IndicatorVector scratch = recompute();
    const auto rel = [](double cached, double fresh) {
        const double scale = std::max(std::fabs(cached), std::fabs(fresh));
        return scale == 0.0 ? 0.0 : std::fabs(cached - fresh) / scale;
    };
    double worst = rel(cached_.x1, scratch.x1);
    worst = std::max(worst, rel(cached_.x2, scratch.x2));
    worst = std::max(worst, rel(cached_.x3, scratch.x3));
    worst = std::max(worst, rel(cached_.x4, scratch.x4));
    worst = std::max(worst, rel(cached_.x5, scratch.x5));
    return worst;
}

uint64_t game_seed(uint64_t master_seed, int game_index) {
    return master_seed ^ hash64(static_cast<uint64_t>(game_index) + 1);
}

GameResult run_game(std::span<const StandScores> scores, std::span<const int> h0,
                    const RunConfig& config, int game_index) {
    if (h0.empty()) throw EmptyHarvestSet("initial harvest set is empty");
    HarvestSet set(scores, h0);
    const int candidates = config.game.candidates;
    if (static_cast<int>(set.complement().size()) < candidates)
        throw InsufficientComplement(
            "complement has " + std::to_string(set.complement().size()) + " stands, need " +
            std::to_string(candidates) + " swap candidates");

    Rng rng(game_seed(config.seed, game_index));

    GameResult result;
    result.game_index = game_index;
    result.trajectory.thinning = config.trajectory_thinning;
    result.trajectory.samples.push_back({0, set.cached(), false, -1, -1});

    std::vector<int> drawn(static_cast<size_t>(candidates));
    std::vector<Strategy> strategies(static_cast<size_t>(candidates) + 1);
    std::vector<IndicatorVector> variants(static_cast<size_t>(candidates));
    strategies[0] = Strategy{};

    for (long iter = 1; iter <= config.iterations; ++iter) {
        const int out_stand = set.draw_member(rng);
        set.draw_candidates(rng, candidates, drawn);

        const StandScores& out_scores = scores[static_cast<size_t>(out_stand)];
        for (int c = 0; c < candidates; ++c) {
            const int in_stand = drawn[static_cast<size_t>(c)];
            strategies[static_cast<size_t>(c) + 1] =
                Strategy{Strategy::Kind::Swap, c + 1, out_stand, in_stand};
            variants[static_cast<size_t>(c)] = apply_swap_delta(
                set.cached(), out_scores, scores[static_cast<size_t>(in_stand)], set.size());
        }

        const UtilityTable table = build_utilities(set.cached(), variants, config.game);
        const GameOutcome outcome = decide(table, config.game, strategies);

        if (outcome.accepted) {
            set.apply_swap(outcome.accepted->out_stand, outcome.accepted->in_stand);
            ++result.accepted_swaps;
            result.trajectory.samples.push_back({iter, set.cached(), true,
                                                 outcome.accepted->out_stand,
                                                 outcome.accepted->in_stand});
        } else if (config.trajectory_thinning > 0 && iter % config.trajectory_thinning == 0) {
            result.trajectory.samples.push_back({iter, set.cached(), false, -1, -1});
        }

        // Drift audit: the cache stays the delta-evolved value (so accepted
        // utilities remain exactly monotone); the audit only verifies it.
        if (config.resync_interval > 0 && iter % config.resync_interval == 0)
            result.max_cache_drift = std::max(result.max_cache_drift, set.drift());
    }

    result.max_cache_drift = std::max(result.max_cache_drift, set.drift());
    result.final_members = set.members();
    result.final_vec = set.cached();
    return result;
}

namespace {

IndicatorVector component_map(const IndicatorVector& a, const IndicatorVector& b,
                              double (*f)(double, double)) {
    return {f(a.x1, b.x1), f(a.x2, b.x2), f(a.x3, b.x3), f(a.x4, b.x4), f(a.x5, b.x5)};
}

IndicatorStats compute_stats(const std::vector<GameResult>& games) {
    IndicatorStats stats;
    const double n = static_cast<double>(games.size());
    stats.min = games.front().final_vec;
    stats.max = games.front().final_vec;
    IndicatorVector sum;
    for (const auto& g : games) {
        const auto& v = g.final_vec;
        sum = component_map(sum, v, [](double a, double b) { return a + b; });
        stats.min = component_map(stats.min, v, [](double a, double b) { return std::min(a, b); });
        stats.max = component_map(stats.max, v, [](double a, double b) { return std::max(a, b); });
    }
    stats.mean = {sum.x1 / n, sum.x2 / n, sum.x3 / n, sum.x4 / n, sum.x5 / n};
    IndicatorVector ss;
    for (const auto& g : games) {
        const auto d = component_map(g.final_vec, stats.mean,
                                     [](double a, double b) { return (a - b) * (a - b); });
        ss = component_map(ss, d, [](double a, double b) { return a + b; });
    }
    stats.stddev = {std::sqrt(ss.x1 / n), std::sqrt(ss.x2 / n), std::sqrt(ss.x3 / n),
                    std::sqrt(ss.x4 / n), std::sqrt(ss.x5 / n)};
    return stats;
}

// Representative game: final payoffs closest (L2) to the cross-game mean,
// each payoff dimension scaled by the magnitude of its mean.
int pick_representative(const std::vector<GameResult>& games, const GameConfig& config) {
    std::array<double, kNumPlayers> mean{};
    std::vector<std::array<double, kNumPlayers>> payoffs;
    payoffs.reserve(games.size());
    for (const auto& g : games) {
        payoffs.push_back(payoffs_from(g.final_vec, config));
        for (int i = 0; i < kNumPlayers; ++i)
            mean[static_cast<size_t>(i)] += payoffs.back()[static_cast<size_t>(i)];
    }
    for (auto& m : mean) m /= static_cast<double>(games.size());

    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < games.size(); ++g) {
        double dist = 0.0;
        for (int i = 0; i < kNumPlayers; ++i) {
            const double scale =
                std::fabs(mean[static_cast<size_t>(i)]) > 0.0 ? std::fabs(mean[static_cast<size_t>(i)]) : 1.0;
            const double d = (payoffs[g][static_cast<size_t>(i)] - mean[static_cast<size_t>(i)]) / scale;
            dist += d * d;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(g);
        }
    }
    return best;
}

}  // namespace

ExperimentResult run_experiment(std::span<const StandScores> scores, std::span<const int> h0,
                                const RunConfig& config, int threads) {
    if (config.games < 1) throw Error("run needs at least one game");
    ExperimentResult result;
    result.games.resize(static_cast<size_t>(config.games));

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, config.games);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const int g = next.fetch_add(1);
            if (g >= config.games) return;
            try {
                result.games[static_cast<size_t>(g)] = run_game(scores, h0, config, g);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    result.stats = compute_stats(result.games);
    result.representative_game = pick_representative(result.games, config.game);
    result.selection_count.assign(scores.size(), 0);
    for (const auto& g : result.games)
        for (int m : g.final_members) ++result.selection_count[static_cast<size_t>(m)];
    return result;
}

void write_trajectory_jsonl(std::ostream& out, const Dataset& dataset,
                            std::span<const GameResult> games) {
    for (const auto& game : games) {
        for (const auto& s : game.trajectory.samples) {
            nlohmann::ordered_json record;
            record["game"] = game.game_index;
            record["iter"] = s.iter;
            record["x1_t"] = s.vec.x1;
            record["x2_frac"] = s.vec.x2;
            record["x3_m3"] = s.vec.x3;
            record["x4_frac"] = s.vec.x4;
            record["x5_ha"] = s.vec.x5;
            record["accepted"] = s.accepted;
            if (s.accepted) {
                record["out_id"] = dataset.stands[static_cast<size_t>(s.out_stand)].id;
                record["in_id"] = dataset.stands[static_cast<size_t>(s.in_stand)].id;
            } else {
                record["out_id"] = nullptr;
                record["in_id"] = nullptr;
            }
            out << record.dump() << '\n';
        }
    }
}

}  // namespace nashforest
