#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nashforest/simulator.hpp"

namespace nashforest {

struct SpeciesRow {
    std::string species;              // species name, or "other" for the pooled tail
    double mean_age = 0.0;            // volume-weighted
    double age_sd = 0.0;              // volume-weighted population sd
    double mean_age_unweighted = 0.0; // logged alongside for comparison
    double volume_m3 = 0.0;
};

// The composition table of a harvest set: area percentages by habitat and
// function, per-species age/volume rows (volume-descending, species under
// 1% of total volume pooled into "other").
struct StrategyStats {
    std::vector<std::pair<std::string, double>> habitat_mix_pct;
    double protective_pct = 0.0;
    double economic_pct = 0.0;
    std::vector<SpeciesRow> species_rows;
    double total_volume_m3 = 0.0;
};

StrategyStats render_stats(const Dataset& dataset, std::span<const int> members);
void write_stats_tsv(std::ostream& out, const StrategyStats& stats);

struct HistBin {
    int start = 0;  // age bin [start, start + width)
    long count = 0;
    double volume_m3 = 0.0;
};

// Per-species age histograms over (stand, species) entries.
struct AgeHistogram {
    int bin_width = 25;
    std::map<std::string, std::vector<HistBin>> by_species;  // aligned bins from 0
};

// Histograms for two harvest sets with identical binning, ready for
// side-by-side plotting.
std::pair<AgeHistogram, AgeHistogram> render_histograms(const Dataset& dataset,
                                                        std::span<const int> before,
                                                        std::span<const int> after,
                                                        int bin_width = 25);
void write_histograms_csv(std::ostream& out, const AgeHistogram& before,
                          const AgeHistogram& after);

// Every series divided by its value at the first sample; x3 is the raw
// volume, not the capped utility. Throws ZeroInitialIndicator (naming the
// series) when a first-sample component is zero.
struct NormalizedTrajectory {
    std::vector<long> iters;
    std::array<std::vector<double>, 5> series;  // x1..x5 in order
    std::vector<bool> accepted;
};

NormalizedTrajectory normalize_trajectory(const Trajectory& trajectory);
void write_normalized_csv(std::ostream& out, const NormalizedTrajectory& normalized);

// The five player payoffs of the initial and final sets, with units.
void write_payoffs_tsv(std::ostream& out, const IndicatorVector& initial,
                       const IndicatorVector& final_vec, double volume_plan);

}  // namespace nashforest
