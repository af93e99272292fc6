#include <doctest.h>

#include <numeric>
#include <sstream>

#include "nashforest/errors.hpp"
#include "nashforest/reporting.hpp"
#include "nashforest/synthetic.hpp"

#include "helpers.hpp"

using namespace nashforest;

namespace {

Dataset two_stand_dataset() {
    Dataset ds;
    ForestStand a;
    a.id = "a";
    a.habitat = "fresh coniferous forest";
    a.area = 4.0;
    a.function = StandFunction::Protective;
    a.shares = {{"pine", 0.8, 80, 240.0}, {"birch", 0.2, 80, 50.0}};
    ForestStand b;
    b.id = "b";
    b.habitat = "alder forest";
    b.area = 1.0;
    b.function = StandFunction::Economic;
    b.shares = {{"pine", 1.0, 40, 120.0}};
    ds.stands = {a, b};
    ds.rebuild_index();
    return ds;
}

}  // namespace

TEST_CASE("stats of a single protective stand") {
    const auto ds = two_stand_dataset();
    const std::vector<int> members = {0};
    const auto stats = render_stats(ds, members);
    CHECK(stats.protective_pct == doctest::Approx(100.0));
    CHECK(stats.economic_pct == doctest::Approx(0.0));
    REQUIRE(stats.habitat_mix_pct.size() == 1);
    CHECK(stats.habitat_mix_pct[0].first == "fresh coniferous forest");
    CHECK(stats.habitat_mix_pct[0].second == doctest::Approx(100.0));
}

TEST_CASE("stats match a hand computation on two stands") {
    const auto ds = two_stand_dataset();
    const std::vector<int> members = {0, 1};
    const auto stats = render_stats(ds, members);

    // Areas 4 + 1: habitat mix 80/20, function mix 80/20.
    CHECK(stats.protective_pct == doctest::Approx(80.0));
    CHECK(stats.economic_pct == doctest::Approx(20.0));
    CHECK(stats.habitat_mix_pct[0].second == doctest::Approx(80.0));
    CHECK(stats.habitat_mix_pct[1].second == doctest::Approx(20.0));

    // Volumes: pine 240*4 + 120*1 = 1080; birch 50*4 = 200; total 1280.
    CHECK(stats.total_volume_m3 == doctest::Approx(1280.0));
    REQUIRE(stats.species_rows.size() == 2);
    CHECK(stats.species_rows[0].species == "pine");
    CHECK(stats.species_rows[0].volume_m3 == doctest::Approx(1080.0));
    // Volume-weighted pine age: (80*960 + 40*120) / 1080 = 75.5556.
    CHECK(stats.species_rows[0].mean_age == doctest::Approx((80.0 * 960.0 + 40.0 * 120.0) / 1080.0));
    CHECK(stats.species_rows[0].mean_age_unweighted == doctest::Approx(60.0));
    // Weighted sd: sqrt(E[a^2] - E[a]^2) over the volume weights.
    const double mean = (80.0 * 960.0 + 40.0 * 120.0) / 1080.0;
    const double second_moment = (80.0 * 80.0 * 960.0 + 40.0 * 40.0 * 120.0) / 1080.0;
    CHECK(stats.species_rows[0].age_sd == doctest::Approx(std::sqrt(second_moment - mean * mean)));

    // Percentages sum to 100.
    double habitat_sum = 0.0;
    for (const auto& [_, pct] : stats.habitat_mix_pct) habitat_sum += pct;
    CHECK(habitat_sum == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(stats.protective_pct + stats.economic_pct == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("stats total volume equals the x3 indicator") {
    const auto bundle = generate_synthetic(150, 77);
    const auto scores = score_all(bundle.dataset, bundle.params, bundle.suitability, Horizon{});
    const auto h = select_initial_harvest(bundle.dataset, 40, 3);
    const auto stats = render_stats(bundle.dataset, h);
    const auto vec = aggregate(scores, h);
    CHECK(testutil::close(stats.total_volume_m3, vec.x3, 1e-6));
}

TEST_CASE("species below one percent of volume pool into 'other'") {
    Dataset ds;
    for (int i = 0; i < 3; ++i) {
        ForestStand stand;
        stand.id = "s" + std::to_string(i);
        stand.habitat = "fresh coniferous forest";
        stand.area = 1.0;
        stand.function = StandFunction::Economic;
        if (i < 2)
            stand.shares = {{"pine", 1.0, 80, 500.0}};
        else
            stand.shares = {{"pine", 0.9, 80, 450.0}, {"fir", 0.1, 80, 5.0}};  // fir 0.5%
        ds.stands.push_back(stand);
    }
    ds.rebuild_index();
    std::vector<int> members = {0, 1, 2};
    const auto stats = render_stats(ds, members);
    REQUIRE(stats.species_rows.size() == 2);
    CHECK(stats.species_rows[0].species == "pine");
    CHECK(stats.species_rows[1].species == "other");
    CHECK(stats.species_rows[1].volume_m3 == doctest::Approx(5.0));
}

TEST_CASE("torun-like stats carry the expected species rows") {
    const auto bundle = generate_synthetic(500, 2718);
    std::vector<int> all(bundle.dataset.stands.size());
    std::iota(all.begin(), all.end(), 0);
    const auto stats = render_stats(bundle.dataset, all);
    CHECK(stats.species_rows[0].species == "pine");
    std::set<std::string> names;
    for (const auto& row : stats.species_rows) names.insert(row.species);
    for (const char* expected : {"pine", "oak", "birch", "alder"}) CHECK(names.count(expected) == 1);
}

TEST_CASE("stats refuse an empty set, histograms accept one") {
    const auto ds = two_stand_dataset();
    CHECK_THROWS_AS(render_stats(ds, std::vector<int>{}), EmptyHarvestSet);

    const std::vector<int> empty;
    const std::vector<int> both = {0, 1};
    const auto [before, after] = render_histograms(ds, empty, both, 25);
    for (const auto& [species, bins] : before.by_species)
        for (const auto& bin : bins) CHECK(bin.count == 0);
}

TEST_CASE("a 59-year share lands in the [50, 75) bin") {
    Dataset ds;
    ForestStand stand;
    stand.id = "p";
    stand.habitat = "fresh coniferous forest";
    stand.area = 2.0;
    stand.function = StandFunction::Economic;
    stand.shares = {{"pine", 1.0, 59, 212.0}};
    ds.stands = {stand};
    ds.rebuild_index();

    const std::vector<int> members = {0};
    const auto [before, after] = render_histograms(ds, members, members, 25);
    const auto& bins = before.by_species.at("pine");
    REQUIRE(bins.size() == 3);  // [0,25) [25,50) [50,75)
    CHECK(bins[0].count == 0);
    CHECK(bins[1].count == 0);
    CHECK(bins[2].count == 1);
    CHECK(bins[2].start == 50);
    CHECK(bins[2].volume_m3 == doctest::Approx(424.0));
}

TEST_CASE("histogram totals equal the number of (stand, species) entries") {
    const auto bundle = generate_synthetic(200, 404);
    const auto before_set = select_initial_harvest(bundle.dataset, 50, 1);
    const auto after_set = select_initial_harvest(bundle.dataset, 50, 2);
    const auto [before, after] = render_histograms(bundle.dataset, before_set, after_set, 25);

    const auto count_entries = [&](const std::vector<int>& members) {
        long n = 0;
        for (int m : members) n += static_cast<long>(bundle.dataset.stands[static_cast<size_t>(m)].shares.size());
        return n;
    };
    const auto count_bins = [](const AgeHistogram& hist) {
        long n = 0;
        for (const auto& [species, bins] : hist.by_species)
            for (const auto& bin : bins) n += bin.count;
        return n;
    };
    CHECK(count_bins(before) == count_entries(before_set));
    CHECK(count_bins(after) == count_entries(after_set));

    // Aligned binning across both histograms.
    for (const auto& [species, bins] : before.by_species) {
        REQUIRE(after.by_species.count(species) == 1);
        CHECK(after.by_species.at(species).size() == bins.size());
    }
}

TEST_CASE("normalization divides by the first sample") {
    Trajectory traj;
    traj.samples.push_back({0, {100.0, 0.5, 2000.0, 0.8, 40.0}, false, -1, -1});
    traj.samples.push_back({50, {50.0, 0.25, 2200.0, 0.4, 30.0}, true, 1, 2});
    const auto normalized = normalize_trajectory(traj);
    for (int s = 0; s < 5; ++s) CHECK(normalized.series[static_cast<size_t>(s)][0] == 1.0);
    CHECK(normalized.series[0][1] == doctest::Approx(0.5));
    CHECK(normalized.series[1][1] == doctest::Approx(0.5));
    CHECK(normalized.series[2][1] == doctest::Approx(1.1));  // raw x3, not capped
    CHECK(normalized.series[3][1] == doctest::Approx(0.5));
    CHECK(normalized.series[4][1] == doctest::Approx(0.75));
}

TEST_CASE("zero initial indicators are reported by name") {
    Trajectory traj;
    traj.samples.push_back({0, {100.0, 0.5, 2000.0, 0.8, 0.0}, false, -1, -1});
    try {
        normalize_trajectory(traj);
        FAIL("expected ZeroInitialIndicator");
    } catch (const ZeroInitialIndicator& e) {
        CHECK(std::string(e.what()).find("x5") != std::string::npos);
    }
}

TEST_CASE("normalized series from a seeded run move the right way") {
    const auto bundle = generate_synthetic(300, 31415);
    const auto scores = score_all(bundle.dataset, bundle.params, bundle.suitability, Horizon{});
    const auto h0 = select_initial_harvest(bundle.dataset, 40, 9);
    RunConfig config;
    config.iterations = 30000;
    config.seed = 2;
    config.game.volume_plan = aggregate(scores, h0).x3;
    const auto result = run_game(scores, h0, config, 0);
    REQUIRE(result.accepted_swaps > 0);

    const auto normalized = normalize_trajectory(result.trajectory);
    const double plan_floor =
        std::min(1.0, config.game.volume_plan / result.trajectory.samples[0].vec.x3);
    std::array<double, 5> previous = {1.0, 1.0, 1.0, 1.0, 1.0};
    for (size_t i = 0; i < normalized.iters.size(); ++i) {
        if (normalized.accepted[i]) {
            CHECK(normalized.series[0][i] <= previous[0]);
            CHECK(normalized.series[1][i] <= previous[1]);
            CHECK(normalized.series[3][i] <= previous[3]);
            CHECK(normalized.series[4][i] <= previous[4]);
            for (int s = 0; s < 5; ++s) previous[static_cast<size_t>(s)] = normalized.series[static_cast<size_t>(s)][i];
        }
        CHECK(normalized.series[2][i] >= plan_floor - 1e-12);
    }
}

TEST_CASE("synthetic generation is deterministic") {
    const auto a = generate_synthetic(80, 1234);
    const auto b = generate_synthetic(80, 1234);
    std::ostringstream wa, wb;
    write_stands_stream(a.dataset, wa);
    write_stands_stream(b.dataset, wb);
    CHECK(wa.str() == wb.str());

    const auto c = generate_synthetic(80, 1235);
    std::ostringstream wc;
    write_stands_stream(c.dataset, wc);
    CHECK(wa.str() != wc.str());
}

TEST_CASE("torun-like generation is pine-dominated by volume") {
    for (uint64_t seed : {1ULL, 22ULL, 333ULL}) {
        const auto bundle = generate_synthetic(600, seed);
        double pine = 0.0, total = 0.0;
        for (const auto& stand : bundle.dataset.stands) {
            for (const auto& share : stand.shares) {
                const double volume = share.standing_volume * stand.area;
                total += volume;
                if (share.species == "pine") pine += volume;
            }
        }
        const double share = pine / total;
        CHECK(share >= 0.70);
        CHECK(share <= 0.90);
    }
}

TEST_CASE("small syntheses hold every stand invariant") {
    const auto bundle = generate_synthetic(20, 55);
    CHECK(bundle.dataset.stands.size() == 20);
    std::set<std::string> ids;
    for (const auto& stand : bundle.dataset.stands) {
        CHECK(stand.area > 0.0);
        CHECK(ids.insert(stand.id).second);  // unique ids
        double sum = 0.0;
        for (const auto& share : stand.shares) {
            CHECK(share.cover > 0.0);
            CHECK(share.cover <= 1.0);
            const double tenths = share.cover * 10.0;
            CHECK(std::fabs(tenths - std::round(tenths)) < 1e-9);
            CHECK(share.age >= 0);
            CHECK(share.standing_volume >= 0.0);
            CHECK(bundle.params.count(share.species) == 1);
            sum += share.cover;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(bundle.suitability.has(stand.habitat));
    }
    CHECK_THROWS_AS(generate_synthetic(19, 55), Error);
}

TEST_CASE("initial harvest selection is deterministic and distinct") {
    const auto bundle = generate_synthetic(100, 8);
    const auto a = select_initial_harvest(bundle.dataset, 25, 5);
    const auto b = select_initial_harvest(bundle.dataset, 25, 5);
    CHECK(a == b);
    CHECK(a.size() == 25);
    CHECK(std::set<int>(a.begin(), a.end()).size() == 25);
    const auto c = select_initial_harvest(bundle.dataset, 25, 6);
    CHECK(a != c);
}

TEST_CASE("emitted stands CSV re-parses under the documented schema") {
    const auto bundle = generate_synthetic(50, 71);
    std::ostringstream out;
    write_stands_stream(bundle.dataset, out);
    std::istringstream in(out.str());
    std::vector<ValidationNote> notes;
    const auto reparsed = parse_stands_stream(in, ParseMode::Strict, &notes);
    CHECK(reparsed.stands.size() == 50);
    CHECK(notes.empty());
}

TEST_CASE("writers emit the documented headers") {
    const auto ds = two_stand_dataset();
    const std::vector<int> members = {0, 1};

    std::ostringstream stats_out;
    write_stats_tsv(stats_out, render_stats(ds, members));
    CHECK(stats_out.str().rfind("section\tkey\tvalue\n", 0) == 0);
    CHECK(stats_out.str().find("mean_age\tage_sd\tmean_age_unweighted\tvolume_1000m3") !=
          std::string::npos);

    const auto [before, after] = render_histograms(ds, members, members, 25);
    std::ostringstream hist_out;
    write_histograms_csv(hist_out, before, after);
    CHECK(hist_out.str().rfind("species,bin_start,bin_end,", 0) == 0);

    Trajectory traj;
    traj.samples.push_back({0, {1.0, 1.0, 1.0, 1.0, 1.0}, false, -1, -1});
    std::ostringstream norm_out;
    write_normalized_csv(norm_out, normalize_trajectory(traj));
    CHECK(norm_out.str() == "iter,accepted,x1,x2,x3,x4,x5\n0,0,1,1,1,1,1\n");

    std::ostringstream payoffs_out;
    write_payoffs_tsv(payoffs_out, {877100.0, 0.178, 570874.0, 0.5, 2393.0},
                      {667600.0, 0.103, 570980.0, 0.45, 1768.0}, 570874.0);
    const std::string payoffs = payoffs_out.str();
    CHECK(payoffs.find("-877.1") != std::string::npos);   // kt conversion
    CHECK(payoffs.find("-17.8") != std::string::npos);    // percent conversion
    CHECK(payoffs.find("570874") != std::string::npos);   // capped utility
}
