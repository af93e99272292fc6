#include "nashforest/indicators.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nashforest/errors.hpp"

namespace nashforest {

bool SuitabilityMap::has(const std::string& habitat) const {
    return by_habitat.count(habitat) > 0;
}

const std::set<std::string>& SuitabilityMap::suitable_for(const std::string& habitat) const {
    const auto it = by_habitat.find(habitat);
    if (it == by_habitat.end())
        throw UnknownHabitat("habitat '" + habitat + "' has no suitability entry");
    return it->second;
}

double shannon_wiener(const std::vector<SpeciesShare>& shares) {
    double sum = 0.0;
    for (const auto& share : shares) {
        if (share.cover > 0.0) sum += share.cover * std::log10(share.cover);
    }
    return sum == 0.0 ? 0.0 : -sum;
}

double suitability(const ForestStand& stand, const SuitabilityMap& map) {
    const auto& suited = map.suitable_for(stand.habitat);
    double total = 0.0;
    for (const auto& share : stand.shares) {
        if (suited.count(share.species)) total += share.cover;
    }
    return total;
}

StandScores score_stand(const ForestStand& stand, const SpeciesParamsMap& params,
                        const SuitabilityMap& map, const Horizon& horizon) {
    StandScores scores;
    scores.lost_co2 = co2_sequestration(stand, params, horizon);
    scores.shannon = shannon_wiener(stand.shares);
    scores.volume = stand_volume(stand);
    scores.suitability = suitability(stand, map);
    scores.protective_area = stand.function == StandFunction::Protective ? stand.area : 0.0;
    return scores;
}

std::vector<StandScores> score_all(const Dataset& dataset, const SpeciesParamsMap& params,
                                   const SuitabilityMap& map, const Horizon& horizon) {
    std::vector<StandScores> all;
    all.reserve(dataset.stands.size());
    for (const auto& stand : dataset.stands) all.push_back(score_stand(stand, params, map, horizon));
    return all;
}

IndicatorVector aggregate(std::span<const StandScores> scores, std::span<const int> members) {
    if (members.empty()) throw EmptyHarvestSet("cannot aggregate an empty harvest set");
    IndicatorVector vec;
    double shannon_sum = 0.0;
    double suitability_sum = 0.0;
    for (int m : members) {
        const StandScores& s = scores[static_cast<size_t>(m)];
        vec.x1 += s.lost_co2;
        shannon_sum += s.shannon;
        vec.x3 += s.volume;
        suitability_sum += s.suitability;
        vec.x5 += s.protective_area;
    }
    const double n = static_cast<double>(members.size());
    vec.x2 = shannon_sum / n;
    vec.x4 = suitability_sum / n;
    return vec;
}

IndicatorVector apply_swap_delta(const IndicatorVector& vec, const StandScores& out_scores,
                                 const StandScores& in_scores, std::size_t h_size) {
    const double n = static_cast<double>(h_size);
    IndicatorVector next;
    next.x1 = vec.x1 + (in_scores.lost_co2 - out_scores.lost_co2);
    next.x2 = vec.x2 + (in_scores.shannon - out_scores.shannon) / n;
    next.x3 = vec.x3 + (in_scores.volume - out_scores.volume);
    next.x4 = vec.x4 + (in_scores.suitability - out_scores.suitability) / n;
    next.x5 = vec.x5 + (in_scores.protective_area - out_scores.protective_area);
    return next;
}

SuitabilityMap load_suitability(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open suitability file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("suitability '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw Error("suitability '" + path + "': expected a JSON object");

    SuitabilityMap map;
    for (const auto& [habitat, species_list] : doc.items()) {
        if (!habitat.empty() && habitat[0] == '_') continue;
        if (!species_list.is_array())
            throw Error("suitability '" + path + "': habitat '" + habitat +
                        "' must map to an array");
        auto& suited = map.by_habitat[habitat];
        for (const auto& sp : species_list) suited.insert(sp.get<std::string>());
    }
    return map;
}

void save_suitability(const SuitabilityMap& map, const std::string& path) {
    nlohmann::ordered_json doc;
    for (const auto& [habitat, species] : map.by_habitat)
        doc[habitat] = std::vector<std::string>(species.begin(), species.end());
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
}

}  // namespace nashforest
