#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nashforest/growth_carbon.hpp"

namespace nashforest {

// Per-stand contributions to the five indicators. Precomputing these once
// makes every swap evaluation O(1).
struct StandScores {
    double lost_co2 = 0.0;         // t CO2 foregone over the horizon if harvested
    double shannon = 0.0;          // Shannon-Wiener index of the stand
    double volume = 0.0;           // m3, stand total
    double suitability = 0.0;      // fraction of cover on habitat-suited species
    double protective_area = 0.0;  // ha when function is Protective, else 0
};

// The five indicators of a harvest set: x1/x3/x5 are sums, x2/x4 are means.
// x2 is stored as a fraction; rendering converts to percent.
struct IndicatorVector {
    double x1 = 0.0;  // t CO2
    double x2 = 0.0;  // mean Shannon index, [0, 1]
    double x3 = 0.0;  // m3
    double x4 = 0.0;  // mean suitability, [0, 1]
    double x5 = 0.0;  // ha
};

// habitat -> set of species considered appropriate for it.
struct SuitabilityMap {
    std::map<std::string, std::set<std::string>> by_habitat;

    bool has(const std::string& habitat) const;
    // Throws UnknownHabitat.
    const std::set<std::string>& suitable_for(const std::string& habitat) const;
};

// -sum(p * log10(p)) over strictly positive covers; p is the recorded
// cover, not renormalized. 0 for a monoculture, 1 for ten shares of 0.1.
double shannon_wiener(const std::vector<SpeciesShare>& shares);

// Summed cover of shares whose species is suited to the stand's habitat.
double suitability(const ForestStand& stand, const SuitabilityMap& map);

StandScores score_stand(const ForestStand& stand, const SpeciesParamsMap& params,
                        const SuitabilityMap& map, const Horizon& horizon);

// Scores for every stand, aligned with dataset order.
std::vector<StandScores> score_all(const Dataset& dataset, const SpeciesParamsMap& params,
                                   const SuitabilityMap& map, const Horizon& horizon);

// Aggregates over the members (dataset positions) of the harvest set.
// Throws EmptyHarvestSet when members is empty.
IndicatorVector aggregate(std::span<const StandScores> scores, std::span<const int> members);

// O(1) update for replacing one member: sums move by (in - out), means by
// (in - out) / h_size. h_size is the (unchanged) harvest set cardinality.
IndicatorVector apply_swap_delta(const IndicatorVector& vec, const StandScores& out_scores,
                                 const StandScores& in_scores, std::size_t h_size);

// JSON habitat -> [species].
SuitabilityMap load_suitability(const std::string& path);
void save_suitability(const SuitabilityMap& map, const std::string& path);

}  // namespace nashforest
