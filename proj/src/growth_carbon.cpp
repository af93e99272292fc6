#include "nashforest/growth_carbon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nashforest/errors.hpp"

namespace nashforest {

QuadraticFit fit_young_growth(const SpeciesParams& params) {
    const auto& table = params.growth_table;
    for (int knot : {20, 30, 40}) {
        if (!table.count(knot))
            throw MissingKnots("species '" + params.species + "': growth table lacks the " +
                               std::to_string(knot) + "-year knot");
    }
    // Least squares for V(a) = c1*a + c2*a^2 over the 20/30/40 knots; the
    // through-origin model already encodes V(0) = 0.
    double s2 = 0.0, s3 = 0.0, s4 = 0.0, sv1 = 0.0, sv2 = 0.0;
    for (int knot : {20, 30, 40}) {
        const double a = knot;
        const double v = table.at(knot);
        s2 += a * a;
        s3 += a * a * a;
        s4 += a * a * a * a;
        sv1 += a * v;
        sv2 += a * a * v;
    }
    const double det = s2 * s4 - s3 * s3;
    QuadraticFit fit;
    fit.c1 = (sv1 * s4 - s3 * sv2) / det;
    fit.c2 = (s2 * sv2 - s3 * sv1) / det;
    return fit;
}

double volume_at_age(const SpeciesParams& params, double age) {
    const auto& table = params.growth_table;
    if (table.empty())
        throw MissingKnots("species '" + params.species + "': growth table is empty");

    const int first_knot = table.begin()->first;
    if (age < first_knot) return fit_young_growth(params)(age);

    const auto last = std::prev(table.end());
    if (age >= last->first) return last->second;  // flat past the table end

    // Piecewise-linear between the bracketing knots.
    auto upper = table.upper_bound(static_cast<int>(std::floor(age)));
    auto lower = std::prev(upper);
    const double span = upper->first - lower->first;
    const double t = (age - lower->first) / span;
    return lower->second + t * (upper->second - lower->second);
}

double continuity_gap_fraction(const SpeciesParams& params) {
    const auto it = params.growth_table.find(20);
    if (it == params.growth_table.end())
        throw MissingKnots("species '" + params.species + "': growth table lacks the 20-year knot");
    const double v20 = it->second;
    if (v20 == 0.0) return 0.0;
    const double fitted = fit_young_growth(params)(20.0);
    return std::fabs(fitted - v20) / v20;
}

double co2_sequestration(const ForestStand& stand, const SpeciesParamsMap& params,
                         const Horizon& horizon) {
    double total = 0.0;
    for (const auto& share : stand.shares) {
        const auto it = params.find(share.species);
        if (it == params.end())
            throw UnknownSpecies("species '" + share.species + "' has no parameters (stand '" +
                                 stand.id + "')");
        const SpeciesParams& sp = it->second;
        const double age = share.age;
        const double growth =
            std::max(0.0, volume_at_age(sp, age + horizon.span) - volume_at_age(sp, age));
        total += growth * stand.area * share.cover * sp.wood_density * sp.carbon_fraction *
                 kCO2PerCarbon;
    }
    return total;
}

namespace {

void validate_params(const SpeciesParams& sp) {
    if (sp.carbon_fraction < 0.45 || sp.carbon_fraction > 0.55)
        throw Error("species '" + sp.species + "': carbon_fraction " +
                    std::to_string(sp.carbon_fraction) + " outside [0.45, 0.55]");
    if (sp.wood_density <= 0.0)
        throw Error("species '" + sp.species + "': wood_density must be positive");
    double prev = -1.0;
    for (const auto& [age, volume] : sp.growth_table) {
        if (age < 0) throw Error("species '" + sp.species + "': negative age knot");
        if (volume < prev)
            throw Error("species '" + sp.species + "': growth table decreases at age " +
                        std::to_string(age));
        prev = volume;
    }
}

}  // namespace

SpeciesParamsMap load_species_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open species params file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("species params '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw Error("species params '" + path + "': expected a JSON object");

    SpeciesParamsMap map;
    for (const auto& [species, body] : doc.items()) {
        if (!species.empty() && species[0] == '_') continue;  // metadata keys
        SpeciesParams sp;
        sp.species = species;
        try {
            for (const auto& [age, volume] : body.at("growth_table").items())
                sp.growth_table[std::stoi(age)] = volume.get<double>();
            sp.carbon_fraction = body.at("carbon_fraction").get<double>();
            sp.wood_density = body.at("wood_density").get<double>();
            sp.harvest_age = body.value("harvest_age", 100);
        } catch (const std::exception& e) {
            throw Error("species params '" + path + "', species '" + species + "': " + e.what());
        }
        validate_params(sp);
        map[species] = std::move(sp);
    }
    if (map.empty()) throw Error("species params '" + path + "': no species defined");
    return map;
}

void save_species_params(const SpeciesParamsMap& params, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["_meta"] =
        "synthetic placeholder growth tables (Chapman-Richards shape); "
        "not calibrated to any real inventory";
    for (const auto& [species, sp] : params) {
        nlohmann::ordered_json table;
        for (const auto& [age, volume] : sp.growth_table) table[std::to_string(age)] = volume;
        doc[species] = {{"growth_table", table},
                        {"carbon_fraction", sp.carbon_fraction},
                        {"wood_density", sp.wood_density},
                        {"harvest_age", sp.harvest_age}};
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
}

}  // namespace nashforest
