#include "nashforest/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nashforest/errors.hpp"

namespace nashforest {

namespace {

constexpr double kOtherVolumeFraction = 0.01;  // pool species under 1% of volume

struct SpeciesAccum {
    double volume = 0.0;
    double age_volume = 0.0;     // sum of age * volume
    double age_sq_volume = 0.0;  // sum of age^2 * volume
    double age_sum = 0.0;
    long entries = 0;
};

}  // namespace

StrategyStats render_stats(const Dataset& dataset, std::span<const int> members) {
    if (members.empty()) throw EmptyHarvestSet("cannot render stats of an empty harvest set");

    StrategyStats stats;
    std::map<std::string, double> habitat_area;
    double protective_area = 0.0;
    double total_area = 0.0;
    std::map<std::string, SpeciesAccum> by_species;

    for (int m : members) {
        const ForestStand& stand = dataset.stands[static_cast<size_t>(m)];
        habitat_area[stand.habitat] += stand.area;
        total_area += stand.area;
        if (stand.function == StandFunction::Protective) protective_area += stand.area;
        for (const auto& share : stand.shares) {
            const double volume = share.standing_volume * stand.area;
            SpeciesAccum& acc = by_species[share.species];
            acc.volume += volume;
            acc.age_volume += share.age * volume;
            acc.age_sq_volume += static_cast<double>(share.age) * share.age * volume;
            acc.age_sum += share.age;
            acc.entries += 1;
            stats.total_volume_m3 += volume;
        }
    }

    for (const auto& [habitat, area] : habitat_area)
        stats.habitat_mix_pct.emplace_back(habitat, 100.0 * area / total_area);
    std::sort(stats.habitat_mix_pct.begin(), stats.habitat_mix_pct.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second > b.second : a.first < b.first;
              });
    stats.protective_pct = 100.0 * protective_area / total_area;
    stats.economic_pct = 100.0 - stats.protective_pct;

    // Volume-weighted age moments per species; species under the volume
    // threshold are pooled into "other" (no age stats for the pool).
    SpeciesAccum other;
    for (const auto& [species, acc] : by_species) {
        if (acc.volume < kOtherVolumeFraction * stats.total_volume_m3) {
            other.volume += acc.volume;
            other.entries += acc.entries;
            continue;
        }
        SpeciesRow row;
        row.species = species;
        row.volume_m3 = acc.volume;
        if (acc.volume > 0.0) {
            row.mean_age = acc.age_volume / acc.volume;
            const double var = acc.age_sq_volume / acc.volume - row.mean_age * row.mean_age;
            row.age_sd = std::sqrt(std::max(0.0, var));
        }
        row.mean_age_unweighted = acc.entries > 0 ? acc.age_sum / static_cast<double>(acc.entries) : 0.0;
        stats.species_rows.push_back(std::move(row));
    }
    std::sort(stats.species_rows.begin(), stats.species_rows.end(),
              [](const SpeciesRow& a, const SpeciesRow& b) {
                  return a.volume_m3 != b.volume_m3 ? a.volume_m3 > b.volume_m3
                                                    : a.species < b.species;
              });
    if (other.volume > 0.0 || other.entries > 0) {
        SpeciesRow row;
        row.species = "other";
        row.volume_m3 = other.volume;
        stats.species_rows.push_back(std::move(row));
    }
    return stats;
}

void write_stats_tsv(std::ostream& out, const StrategyStats& stats) {
    out << "section\tkey\tvalue\n";
    for (const auto& [habitat, pct] : stats.habitat_mix_pct)
        out << "habitat_pct\t" << habitat << '\t' << format_double(pct) << '\n';
    out << "function_pct\tprotective\t" << format_double(stats.protective_pct) << '\n';
    out << "function_pct\teconomic\t" << format_double(stats.economic_pct) << '\n';
    out << "total\tvolume_m3\t" << format_double(stats.total_volume_m3) << '\n';
    out << "\nspecies\tmean_age\tage_sd\tmean_age_unweighted\tvolume_1000m3\n";
    for (const auto& row : stats.species_rows) {
        out << row.species << '\t';
        if (row.species == "other")
            out << "\t\t";
        else
            out << format_double(std::round(row.mean_age * 10.0) / 10.0) << '\t'
                << format_double(std::round(row.age_sd * 10.0) / 10.0) << '\t'
                << format_double(std::round(row.mean_age_unweighted * 10.0) / 10.0) << '\t';
        out << format_double(std::round(row.volume_m3 / 100.0) / 10.0) << '\n';
    }
}

std::pair<AgeHistogram, AgeHistogram> render_histograms(const Dataset& dataset,
                                                        std::span<const int> before,
                                                        std::span<const int> after,
                                                        int bin_width) {
    if (bin_width <= 0) throw Error("histogram bin width must be positive");

    int max_age = 0;
    for (auto members : {before, after})
        for (int m : members)
            for (const auto& share : dataset.stands[static_cast<size_t>(m)].shares)
                max_age = std::max(max_age, share.age);
    const int bins = max_age / bin_width + 1;

    auto build = [&](std::span<const int> members) {
        AgeHistogram hist;
        hist.bin_width = bin_width;
        std::set<std::string> species_seen;
        for (auto other : {before, after})
            for (int m : other)
                for (const auto& share : dataset.stands[static_cast<size_t>(m)].shares)
                    species_seen.insert(share.species);
        for (const auto& sp : species_seen) {
            auto& row = hist.by_species[sp];
            row.resize(static_cast<size_t>(bins));
            for (int b = 0; b < bins; ++b) row[static_cast<size_t>(b)].start = b * bin_width;
        }
        for (int m : members) {
            const ForestStand& stand = dataset.stands[static_cast<size_t>(m)];
            for (const auto& share : stand.shares) {
                auto& row = hist.by_species[share.species];
                auto& bin = row[static_cast<size_t>(share.age / bin_width)];
                bin.count += 1;
                bin.volume_m3 += share.standing_volume * stand.area;
            }
        }
        return hist;
    };
    return {build(before), build(after)};
}

void write_histograms_csv(std::ostream& out, const AgeHistogram& before,
                          const AgeHistogram& after) {
    out << "species,bin_start,bin_end,count_initial,volume_m3_initial,count_final,volume_m3_final\n";
    for (const auto& [species, bins] : before.by_species) {
        const auto after_it = after.by_species.find(species);
        for (size_t b = 0; b < bins.size(); ++b) {
            const HistBin& lhs = bins[b];
            const HistBin* rhs = after_it != after.by_species.end() && b < after_it->second.size()
                                     ? &after_it->second[b]
                                     : nullptr;
            out << species << ',' << lhs.start << ',' << lhs.start + before.bin_width << ','
                << lhs.count << ',' << format_double(lhs.volume_m3) << ','
                << (rhs ? rhs->count : 0) << ',' << format_double(rhs ? rhs->volume_m3 : 0.0)
                << '\n';
        }
    }
}

NormalizedTrajectory normalize_trajectory(const Trajectory& trajectory) {
    if (trajectory.samples.empty()) throw Error("trajectory has no samples");
    const IndicatorVector& first = trajectory.samples.front().vec;
    const std::array<std::pair<const char*, double>, 5> initial = {{{"x1", first.x1},
                                                                    {"x2", first.x2},
                                                                    {"x3", first.x3},
                                                                    {"x4", first.x4},
                                                                    {"x5", first.x5}}};
    for (const auto& [name, value] : initial) {
        if (value == 0.0)
            throw ZeroInitialIndicator(std::string("initial ") + name +
                                       " is zero; cannot normalize");
    }

    NormalizedTrajectory normalized;
    normalized.iters.reserve(trajectory.samples.size());
    for (const auto& sample : trajectory.samples) {
        normalized.iters.push_back(sample.iter);
        normalized.accepted.push_back(sample.accepted);
        normalized.series[0].push_back(sample.vec.x1 / first.x1);
        normalized.series[1].push_back(sample.vec.x2 / first.x2);
        normalized.series[2].push_back(sample.vec.x3 / first.x3);  // raw volume, not capped
        normalized.series[3].push_back(sample.vec.x4 / first.x4);
        normalized.series[4].push_back(sample.vec.x5 / first.x5);
    }
    return normalized;
}

void write_normalized_csv(std::ostream& out, const NormalizedTrajectory& normalized) {
    out << "iter,accepted,x1,x2,x3,x4,x5\n";
    for (size_t i = 0; i < normalized.iters.size(); ++i) {
        out << normalized.iters[i] << ',' << (normalized.accepted[i] ? 1 : 0);
        for (const auto& series : normalized.series) out << ',' << format_double(series[i]);
        out << '\n';
    }
}

void write_payoffs_tsv(std::ostream& out, const IndicatorVector& initial,
                       const IndicatorVector& final_vec, double volume_plan) {
    const auto row = [&out](const char* player, const char* unit, double a, double b) {
        out << player << '\t' << unit << '\t' << format_double(a) << '\t' << format_double(b)
            << '\n';
    };
    out << "player\tunit\tinitial\tfinal\n";
    row("1 (-X1)", "kt CO2", -initial.x1 / 1000.0, -final_vec.x1 / 1000.0);
    row("2 (-X2)", "%", -initial.x2 * 100.0, -final_vec.x2 * 100.0);
    row("3 (min(X3, plan))", "m3", std::min(initial.x3, volume_plan),
        std::min(final_vec.x3, volume_plan));
    row("4 (-X4)", "-", -initial.x4, -final_vec.x4);
    row("5 (-X5)", "ha", -initial.x5, -final_vec.x5);
    out << "raw_x3\tm3\t" << format_double(initial.x3) << '\t' << format_double(final_vec.x3)
        << '\n';
    out << "volume_plan\tm3\t" << format_double(volume_plan) << '\t' << format_double(volume_plan)
        << '\n';
}

}  // namespace nashforest
