#pragma once

#include <map>
#include <string>

#include "nashforest/stand_model.hpp"

namespace nashforest {

// Grams of CO2 per gram of elemental carbon.
inline constexpr double kCO2PerCarbon = 44.0 / 12.0;

// Per-species growth reference and carbon conversion constants.
struct SpeciesParams {
    std::string species;
    std::map<int, double> growth_table;  // age [years] -> cumulative V(age) [m3/ha]
    double carbon_fraction = 0.5;        // share of dry mass that is carbon, [0.45, 0.55]
    double wood_density = 0.45;          // t dry mass per m3
    int harvest_age = 100;               // informational
};

using SpeciesParamsMap = std::map<std::string, SpeciesParams>;

// Planning horizon for sequestration prediction.
struct Horizon {
    int start_year = 2023;
    int span = 10;  // years, > 0
};

// V(a) = c1*a + c2*a^2: the through-origin model used below age 20,
// least-squares fitted to the 20/30/40 knots.
struct QuadraticFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double operator()(double age) const { return c1 * age + c2 * age * age; }
};

// Throws MissingKnots unless the table has entries at 20, 30 and 40.
QuadraticFit fit_young_growth(const SpeciesParams& params);

// Reference volume at any age:
//   age < first knot  -> young-growth quadratic (V(0) = 0 exactly)
//   within the table  -> piecewise-linear between knots
//   past the last knot-> constant at the last knot value
double volume_at_age(const SpeciesParams& params, double age);

// |fit(20) - table V(20)| as a fraction of V(20); reported in run logs.
double continuity_gap_fraction(const SpeciesParams& params);

// Predicted CO2 uptake of the stand over the horizon, in tons:
// sum over shares of dV * area * cover * wood_density * carbon_fraction * 44/12,
// dV = V(age + span) - V(age), clamped at 0 per share.
double co2_sequestration(const ForestStand& stand, const SpeciesParamsMap& params,
                         const Horizon& horizon);

// JSON map species -> {growth_table, carbon_fraction, wood_density, harvest_age};
// keys starting with '_' are ignored on load. Validates the stated invariants.
SpeciesParamsMap load_species_params(const std::string& path);
void save_species_params(const SpeciesParamsMap& params, const std::string& path);

}  // namespace nashforest
