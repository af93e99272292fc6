#include <doctest.h>

#include <cmath>

#include "nashforest/errors.hpp"
#include "nashforest/growth_carbon.hpp"
#include "nashforest/synthetic.hpp"

#include "helpers.hpp"

using namespace nashforest;

namespace {

SpeciesParams linear_table_species() {
    SpeciesParams sp;
    sp.species = "test";
    for (int age = 20; age <= 120; age += 10) sp.growth_table[age] = 5.0 * age;
    return sp;
}

}  // namespace

TEST_CASE("volume at age zero is exactly zero") {
    for (const auto& [name, sp] : default_species_params()) {
        INFO("species ", name);
        CHECK(volume_at_age(sp, 0.0) == 0.0);
    }
}

TEST_CASE("linear interpolation between knots") {
    const auto sp = linear_table_species();
    CHECK(volume_at_age(sp, 25.0) == doctest::Approx(125.0));  // {20:100, 30:150} midpoint
    CHECK(volume_at_age(sp, 20.0) == doctest::Approx(100.0));
    CHECK(volume_at_age(sp, 30.0) == doctest::Approx(150.0));
    CHECK(volume_at_age(sp, 119.0) == doctest::Approx(595.0));
}

TEST_CASE("constant volume past the last knot") {
    const auto sp = linear_table_species();
    CHECK(volume_at_age(sp, 120.0) == doctest::Approx(600.0));
    CHECK(volume_at_age(sp, 121.0) == doctest::Approx(600.0));
    CHECK(volume_at_age(sp, 500.0) == doctest::Approx(600.0));
}

TEST_CASE("young-age extrapolation on exactly quadratic data") {
    // 5*a data is fitted exactly by c1 = 5, c2 = 0, so V(10) = 50.
    const auto sp = linear_table_species();
    CHECK(volume_at_age(sp, 10.0) == doctest::Approx(50.0).epsilon(1e-9));

    const auto fit = fit_young_growth(sp);
    CHECK(fit.c1 == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(fit.c2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("young-age fit matches the normal-equation oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        SpeciesParams sp;
        sp.species = "rnd";
        double v = rng.uniform(20.0, 120.0);
        for (int age = 20; age <= 120; age += 10) {
            sp.growth_table[age] = v;
            v += rng.uniform(5.0, 90.0);
        }
        const auto fit = fit_young_growth(sp);
        const auto [c1, c2] = testutil::oracle_quadratic(
            {{{20.0, sp.growth_table[20]}, {30.0, sp.growth_table[30]}, {40.0, sp.growth_table[40]}}});
        CHECK(testutil::close(fit.c1, c1, 1e-9));
        CHECK(testutil::close(fit.c2, c2, 1e-9));
        const double age = rng.uniform(0.0, 20.0);
        CHECK(testutil::close(volume_at_age(sp, age), c1 * age + c2 * age * age, 1e-9));
    }
}

TEST_CASE("missing 20/30/40 knots raise MissingKnots") {
    SpeciesParams sp;
    sp.species = "gappy";
    sp.growth_table = {{20, 100.0}, {40, 200.0}};  // no 30-year knot
    CHECK_THROWS_AS(volume_at_age(sp, 10.0), MissingKnots);
    CHECK_THROWS_AS(fit_young_growth(sp), MissingKnots);
}

TEST_CASE("shipped growth tables stay continuous at the 20-year junction") {
    for (const auto& [name, sp] : default_species_params()) {
        INFO("species ", name);
        CHECK(continuity_gap_fraction(sp) < 0.05);
    }
}

TEST_CASE("sequestration of the worked single-share example") {
    // dV = 50 m3/ha over the horizon, 2 ha, full cover, density 0.4,
    // carbon fraction 0.5 -> 50*2*0.4*0.5*44/12 = 73.33 t CO2.
    SpeciesParams sp;
    sp.species = "pine";
    sp.growth_table = {{20, 100.0}, {30, 150.0}, {40, 175.0}};
    sp.wood_density = 0.4;
    sp.carbon_fraction = 0.5;

    ForestStand stand;
    stand.id = "x";
    stand.area = 2.0;
    stand.shares = {{"pine", 1.0, 20, 0.0}};

    SpeciesParamsMap params{{"pine", sp}};
    const double result = co2_sequestration(stand, params, Horizon{2023, 10});
    CHECK(result == doctest::Approx(50.0 * 2.0 * 1.0 * 0.4 * 0.5 * 44.0 / 12.0));
    CHECK(result == doctest::Approx(73.3333333333).epsilon(1e-6));
}

TEST_CASE("no sequestration beyond the flat tail of the table") {
    const SpeciesParamsMap params{{"test", linear_table_species()}};
    ForestStand stand;
    stand.area = 3.0;
    stand.shares = {{"test", 0.8, 120, 300.0}};
    CHECK(co2_sequestration(stand, params, Horizon{2023, 10}) == 0.0);
    stand.shares[0].age = 140;
    CHECK(co2_sequestration(stand, params, Horizon{2023, 10}) == 0.0);
}

TEST_CASE("stand with no shares sequesters nothing") {
    ForestStand stand;
    stand.area = 3.0;
    CHECK(co2_sequestration(stand, SpeciesParamsMap{}, Horizon{}) == 0.0);
}

TEST_CASE("unknown species is reported by name") {
    ForestStand stand;
    stand.id = "s9";
    stand.area = 1.0;
    stand.shares = {{"willow", 1.0, 30, 50.0}};
    try {
        co2_sequestration(stand, default_species_params(), Horizon{});
        FAIL("expected UnknownSpecies");
    } catch (const UnknownSpecies& e) {
        CHECK(std::string(e.what()).find("willow") != std::string::npos);
    }
}

TEST_CASE("sequestration is additive over shares") {
    const auto params = default_species_params();
    const Horizon horizon{2023, 10};
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        ForestStand stand;
        stand.area = rng.uniform(0.5, 10.0);
        std::vector<std::string> names = {"pine", "oak", "birch", "alder"};
        double sum = 0.0;
        for (const auto& name : names) {
            SpeciesShare share{name, 0.2, rng.uniform_int(10, 130), 0.0};
            ForestStand single = stand;
            single.shares = {share};
            sum += co2_sequestration(single, params, horizon);
            stand.shares.push_back(share);
        }
        CHECK(testutil::close(co2_sequestration(stand, params, horizon), sum, 1e-12));
    }
}

TEST_CASE("sequestration scales exactly with wood density") {
    auto params = default_species_params();
    ForestStand stand;
    stand.area = 4.0;
    stand.shares = {{"pine", 0.7, 45, 0.0}, {"oak", 0.3, 45, 0.0}};
    const Horizon horizon{2023, 10};
    const double base = co2_sequestration(stand, params, horizon);
    for (auto& [name, sp] : params) sp.wood_density *= 1.75;
    CHECK(co2_sequestration(stand, params, horizon) == doctest::Approx(1.75 * base).epsilon(1e-12));
}

TEST_CASE("sequestration is monotone in the horizon span") {
    const auto params = default_species_params();
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        ForestStand stand;
        stand.area = 2.0;
        const char* names[] = {"pine", "oak", "birch", "beech"};
        stand.shares = {{names[trial % 4], 1.0, rng.uniform_int(0, 130), 0.0}};
        double previous = 0.0;
        for (int span = 1; span <= 30; span += 3) {
            const double value = co2_sequestration(stand, params, Horizon{2023, span});
            CHECK(value >= previous);
            previous = value;
        }
    }
}

TEST_CASE("sequestration is never negative") {
    const auto params = default_species_params();
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        ForestStand stand;
        stand.area = rng.uniform(0.5, 10.0);
        stand.shares = {{"pine", 0.5, rng.uniform_int(0, 150), 0.0}};
        const int span = rng.uniform_int(1, 40);
        CHECK(co2_sequestration(stand, params, Horizon{2023, span}) >= 0.0);
    }
}

TEST_CASE("species params save/load round-trip and validation") {
    const auto dir = testutil::temp_dir();
    const auto path = (dir / "params_roundtrip.json").string();
    const auto params = default_species_params();
    save_species_params(params, path);
    const auto loaded = load_species_params(path);
    REQUIRE(loaded.size() == params.size());
    for (const auto& [name, sp] : params) {
        const auto& other = loaded.at(name);
        CHECK(other.growth_table == sp.growth_table);
        CHECK(other.carbon_fraction == sp.carbon_fraction);
        CHECK(other.wood_density == sp.wood_density);
        CHECK(other.harvest_age == sp.harvest_age);
    }

    const auto bad_fraction = testutil::write_temp_file(
        "params_bad_fraction.json",
        R"({"x": {"growth_table": {"20": 1, "30": 2, "40": 3}, "carbon_fraction": 0.9,
             "wood_density": 0.4, "harvest_age": 80}})");
    CHECK_THROWS_AS(load_species_params(bad_fraction), Error);

    const auto decreasing = testutil::write_temp_file(
        "params_decreasing.json",
        R"({"x": {"growth_table": {"20": 10, "30": 5, "40": 30}, "carbon_fraction": 0.5,
             "wood_density": 0.4, "harvest_age": 80}})");
    CHECK_THROWS_AS(load_species_params(decreasing), Error);
}

TEST_CASE("shipped species params file loads and satisfies the invariants") {
    const auto params = load_species_params(std::string(NASHFOREST_DATA_DIR) + "/species_params.json");
    CHECK(params.size() >= 6);
    for (const auto& [name, sp] : params) {
        INFO("species ", name);
        CHECK(volume_at_age(sp, 0.0) == 0.0);
        CHECK(continuity_gap_fraction(sp) < 0.05);
    }
}
