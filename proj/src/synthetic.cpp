#include "nashforest/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nashforest/errors.hpp"
#include "nashforest/rng.hpp"

namespace nashforest {

namespace {

double chapman_richards(double age, double vmax, double k, double p) {
    return vmax * std::pow(1.0 - std::exp(-k * age), p);
}

SpeciesParams make_species(const std::string& name, double vmax, double k, double p,
                           double carbon_fraction, double wood_density, int harvest_age) {
    SpeciesParams sp;
    sp.species = name;
    sp.carbon_fraction = carbon_fraction;
    sp.wood_density = wood_density;
    sp.harvest_age = harvest_age;
    for (int age = 20; age <= 120; age += 10)
        sp.growth_table[age] = std::round(chapman_richards(age, vmax, k, p) * 10.0) / 10.0;
    return sp;
}

struct AgeDist {
    double mean;
    double sd;
};

const std::map<std::string, AgeDist>& age_distributions() {
    static const std::map<std::string, AgeDist> dists = {
        {"pine", {80.0, 32.0}},  {"oak", {91.0, 38.0}},   {"birch", {57.0, 25.0}},
        {"alder", {72.0, 32.0}}, {"poplar", {56.0, 26.0}}, {"beech", {90.0, 33.0}},
        {"spruce", {75.0, 30.0}}, {"fir", {85.0, 30.0}},
    };
    return dists;
}

struct WeightedSpecies {
    const char* species;
    double weight;
};

struct HabitatRule {
    double weight;  // share of stands drawn into this habitat
    std::vector<WeightedSpecies> dominants;
    std::vector<const char*> secondaries;
    int min_dominant_tenths;
    int max_dominant_tenths;
};

std::vector<std::pair<std::string, HabitatRule>> habitat_rules(const std::string& profile) {
    if (profile == "torun-like") {
        // Area mix of a pine-dominated lowland district: mostly fresh
        // coniferous, a fifth fresh deciduous, wet and riparian slivers.
        return {
            {"fresh coniferous forest",
             {0.639, {{"pine", 0.96}, {"birch", 0.04}}, {"birch", "oak", "spruce"}, 8, 10}},
            {"dry coniferous forest", {0.018, {{"pine", 1.0}}, {"birch"}, 9, 10}},
            {"wet coniferous forest",
             {0.010, {{"pine", 0.6}, {"spruce", 0.4}}, {"birch", "spruce"}, 7, 10}},
            {"fresh deciduous forest",
             {0.211,
              {{"pine", 0.40}, {"oak", 0.29}, {"beech", 0.16}, {"birch", 0.15}},
              {"oak", "beech", "birch", "pine", "spruce"},
              5,
              9}},
            {"wet deciduous forest",
             {0.043, {{"oak", 0.4}, {"alder", 0.3}, {"birch", 0.3}}, {"oak", "alder", "pine"}, 5, 9}},
            {"alder forest", {0.032, {{"alder", 1.0}}, {"birch"}, 7, 10}},
            {"riparian forest",
             {0.047, {{"alder", 0.5}, {"poplar", 0.5}}, {"alder", "poplar", "oak"}, 6, 9}},
        };
    }
    if (profile == "balanced") {
        const double w = 1.0 / 7.0;
        return {
            {"fresh coniferous forest", {w, {{"pine", 0.7}, {"spruce", 0.3}}, {"birch", "oak"}, 5, 10}},
            {"dry coniferous forest", {w, {{"pine", 1.0}}, {"birch"}, 5, 10}},
            {"wet coniferous forest", {w, {{"spruce", 0.7}, {"pine", 0.3}}, {"birch"}, 5, 10}},
            {"fresh deciduous forest",
             {w, {{"oak", 0.4}, {"beech", 0.3}, {"birch", 0.3}}, {"oak", "beech", "pine", "fir"}, 5, 10}},
            {"wet deciduous forest", {w, {{"oak", 0.5}, {"alder", 0.5}}, {"birch", "alder"}, 5, 10}},
            {"alder forest", {w, {{"alder", 1.0}}, {"birch"}, 5, 10}},
            {"riparian forest", {w, {{"poplar", 0.6}, {"alder", 0.4}}, {"oak", "alder"}, 5, 10}},
        };
    }
    throw Error("unknown synthetic profile '" + profile + "'");
}

template <typename T>
size_t weighted_choice(Rng& rng, const std::vector<T>& items, double total_weight,
                       double (*weight_of)(const T&)) {
    double ticket = rng.uniform01() * total_weight;
    for (size_t i = 0; i < items.size(); ++i) {
        ticket -= weight_of(items[i]);
        if (ticket <= 0.0) return i;
    }
    return items.size() - 1;
}

}  // namespace

SpeciesParamsMap default_species_params() {
    SpeciesParamsMap map;
    for (const auto& sp : {
             make_species("pine", 620.0, 0.022, 1.7, 0.51, 0.43, 100),
             make_species("oak", 520.0, 0.016, 1.9, 0.49, 0.65, 140),
             make_species("birch", 420.0, 0.030, 1.6, 0.48, 0.53, 70),
             make_species("alder", 460.0, 0.028, 1.7, 0.47, 0.45, 80),
             make_species("poplar", 560.0, 0.040, 1.5, 0.45, 0.35, 40),
             make_species("beech", 600.0, 0.015, 2.0, 0.50, 0.68, 120),
             make_species("spruce", 680.0, 0.020, 1.9, 0.50, 0.40, 100),
             make_species("fir", 640.0, 0.018, 2.0, 0.50, 0.37, 110),
         })
        map[sp.species] = sp;
    return map;
}

SuitabilityMap default_suitability() {
    SuitabilityMap map;
    map.by_habitat["fresh coniferous forest"] = {"pine", "spruce"};
    map.by_habitat["dry coniferous forest"] = {"pine"};
    map.by_habitat["wet coniferous forest"] = {"spruce", "birch"};
    map.by_habitat["fresh deciduous forest"] = {"oak", "beech", "spruce", "fir"};
    map.by_habitat["wet deciduous forest"] = {"oak", "alder", "birch"};
    map.by_habitat["alder forest"] = {"alder"};
    map.by_habitat["riparian forest"] = {"alder", "poplar"};
    return map;
}

SyntheticBundle generate_synthetic(int n_stands, uint64_t seed, const std::string& profile) {
    if (n_stands < 20) throw Error("synthetic datasets need at least 20 stands");

    SyntheticBundle bundle;
    bundle.params = default_species_params();
    bundle.suitability = default_suitability();

    const auto rules = habitat_rules(profile);
    const double protective_fraction = profile == "balanced" ? 0.5 : 0.917;
    double habitat_total = 0.0;
    for (const auto& [_, rule] : rules) habitat_total += rule.weight;

    Rng rng(hash64(seed) ^ 0x666f726573747321ULL);
    bundle.dataset.stands.reserve(static_cast<size_t>(n_stands));

    for (int i = 0; i < n_stands; ++i) {
        // Pick the habitat by area weight.
        double ticket = rng.uniform01() * habitat_total;
        size_t h = 0;
        for (; h + 1 < rules.size(); ++h) {
            ticket -= rules[h].second.weight;
            if (ticket <= 0.0) break;
        }
        const auto& habitat = rules[h].first;
        const HabitatRule& rule = rules[h].second;

        ForestStand stand;
        char id[40];
        std::snprintf(id, sizeof id, "12-24-1-%02d-%d-%c", static_cast<int>(h) + 1, i / 8 + 1,
                      static_cast<char>('a' + i % 8));
        stand.id = id;
        stand.habitat = habitat;
        stand.function = rng.uniform01() < protective_fraction ? StandFunction::Protective
                                                               : StandFunction::Economic;
        stand.area = std::round(std::clamp(std::exp(rng.normal(std::log(2.8), 0.7)), 0.3, 30.0) *
                                100.0) /
                     100.0;

        const size_t d = weighted_choice<WeightedSpecies>(
            rng, rule.dominants, std::accumulate(rule.dominants.begin(), rule.dominants.end(), 0.0,
                                                 [](double acc, const WeightedSpecies& w) {
                                                     return acc + w.weight;
                                                 }),
            [](const WeightedSpecies& w) { return w.weight; });
        const std::string dominant = rule.dominants[d].species;

        const int dominant_tenths = rng.uniform_int(rule.min_dominant_tenths, rule.max_dominant_tenths);
        int remaining = 10 - dominant_tenths;

        // All shares of a record carry the stand age, as inventories do.
        const AgeDist dist = age_distributions().at(dominant);
        const int age =
            static_cast<int>(std::lround(std::clamp(rng.normal(dist.mean, dist.sd), 8.0, 150.0)));

        std::vector<std::pair<std::string, int>> composition = {{dominant, dominant_tenths}};
        std::vector<std::string> pool(rule.secondaries.begin(), rule.secondaries.end());
        std::erase(pool, dominant);
        while (remaining > 0 && !pool.empty() && composition.size() < 4) {
            const size_t pick = rng.bounded(pool.size());
            const int tenths = remaining == 1 ? 1 : rng.uniform_int(1, std::min(remaining, 3));
            composition.emplace_back(pool[pick], tenths);
            pool.erase(pool.begin() + static_cast<long>(pick));
            remaining -= tenths;
        }
        if (remaining > 0) composition.front().second += remaining;  // pool exhausted

        for (const auto& [species, tenths] : composition) {
            SpeciesShare share;
            share.species = species;
            share.cover = tenths / 10.0;
            share.age = age;
            const double reference = volume_at_age(bundle.params.at(species), age);
            share.standing_volume =
                std::round(reference * share.cover * rng.uniform(0.82, 1.18) * 10.0) / 10.0;
            stand.shares.push_back(std::move(share));
        }
        bundle.dataset.stands.push_back(std::move(stand));
    }

    bundle.dataset.rebuild_index();
    return bundle;
}

std::vector<int> select_initial_harvest(const Dataset& dataset, int count, uint64_t seed) {
    const int total = static_cast<int>(dataset.stands.size());
    if (count < 1 || count >= total)
        throw Error("initial harvest size must be in [1, dataset size)");
    std::vector<int> positions(static_cast<size_t>(total));
    std::iota(positions.begin(), positions.end(), 0);
    Rng rng(hash64(seed) ^ 0x68305f706963ULL);
    for (int j = 0; j < count; ++j) {
        const size_t r = static_cast<size_t>(j) + rng.bounded(static_cast<uint64_t>(total - j));
        std::swap(positions[static_cast<size_t>(j)], positions[r]);
    }
    positions.resize(static_cast<size_t>(count));
    std::sort(positions.begin(), positions.end());
    return positions;
}

}  // namespace nashforest
