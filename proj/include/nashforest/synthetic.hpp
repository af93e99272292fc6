#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nashforest/indicators.hpp"

namespace nashforest {

// A generated stand inventory plus the parameter files it needs.
struct SyntheticBundle {
    Dataset dataset;
    SpeciesParamsMap params;
    SuitabilityMap suitability;
};

// Placeholder growth curves and conversion constants for the built-in
// species set. The curves are synthetic (Chapman-Richards shape), not
// calibrated to any real inventory.
SpeciesParamsMap default_species_params();
SuitabilityMap default_suitability();

// Deterministic synthetic inventory. Profiles:
//   "torun-like" - ~64% fresh coniferous area, ~92% protective,
//                  pine-dominated volume (desk-scale stand-in for a real
//                  district inventory)
//   "balanced"   - flat habitat/function mix, useful for stress tests
// n_stands must be >= 20.
SyntheticBundle generate_synthetic(int n_stands, uint64_t seed,
                                   const std::string& profile = "torun-like");

// Uniform random subset of `count` dataset positions; deterministic in seed.
std::vector<int> select_initial_harvest(const Dataset& dataset, int count, uint64_t seed);

}  // namespace nashforest
