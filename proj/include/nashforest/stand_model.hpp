#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace nashforest {

enum class StandFunction { Protective, Economic };

const char* to_string(StandFunction f);
StandFunction parse_function(const std::string& text);  // case-insensitive

// One species entry of a stand inventory record.
struct SpeciesShare {
    std::string species;
    double cover = 0.0;            // fraction of the stand in [0, 1]
    int age = 0;                   // years
    double standing_volume = 0.0;  // m3/ha
};

// A uniform forest area managed as one unit; the atomic inventory record.
struct ForestStand {
    std::string id;       // forest address, unique within a dataset
    std::string habitat;  // open vocabulary, keys the suitability config
    double area = 0.0;    // ha, > 0
    StandFunction function = StandFunction::Economic;
    std::vector<SpeciesShare> shares;

    double cover_sum() const;
};

struct Dataset {
    std::vector<ForestStand> stands;                // file order preserved
    std::unordered_map<std::string, int> index;     // id -> position in stands

    // Returns the position of `id`, or -1 when absent.
    int position_of(const std::string& id) const;
    void rebuild_index();
};

enum class ParseMode { Strict, Lenient };

// One line of the validation report ({severity, id, message} JSONL).
struct ValidationNote {
    std::string severity;  // "warning" or "error"
    std::string id;        // stand id when known, else empty
    std::string message;
};

// Long-format CSV, one row per stand-species pair, grouped by stand id.
// Columns: id,habitat,area_ha,function,species,cover,age,volume_m3_per_ha.
// Strict mode enforces the 10% cover grid; lenient mode downgrades grid
// violations to warnings. Notes (warnings) are appended to *notes if given.
Dataset parse_stands(const std::string& path, ParseMode mode,
                     std::vector<ValidationNote>* notes = nullptr);
Dataset parse_stands_stream(std::istream& in, ParseMode mode,
                            std::vector<ValidationNote>* notes = nullptr);

void write_stands(const Dataset& dataset, const std::string& path);
void write_stands_stream(const Dataset& dataset, std::ostream& out);

// Total standing volume of the stand in m3: per-hectare share volumes
// are scaled by the stand area and summed.
double stand_volume(const ForestStand& stand);

// Shortest round-trip decimal form; used everywhere a double is emitted
// so that emitted files are byte-stable and re-parse exactly.
std::string format_double(double value);

}  // namespace nashforest
