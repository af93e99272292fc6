#include "nashforest/stand_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nashforest/errors.hpp"

namespace nashforest {

namespace {

constexpr double kCoverSumEps = 1e-9;
constexpr double kCoverGridEps = 1e-9;

const std::array<const char*, 8> kColumns = {
    "id", "habitat", "area_ha", "function", "species", "cover", "age", "volume_m3_per_ha"};

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, int line_no, const char* column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw MalformedRow(line_no, column, "'" + text + "' is not a number");
    if (!std::isfinite(value))
        throw MalformedRow(line_no, column, "'" + text + "' is not finite");
    return value;
}

int parse_age(const std::string& text, int line_no) {
    int value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw MalformedRow(line_no, "age", "'" + text + "' is not an integer");
    return value;
}

bool on_cover_grid(double cover) {
    return std::fabs(cover * 10.0 - std::round(cover * 10.0)) <= kCoverGridEps * 10.0;
}

}  // namespace

const char* to_string(StandFunction f) {
    return f == StandFunction::Protective ? "protective" : "economic";
}

StandFunction parse_function(const std::string& text) {
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "protective") return StandFunction::Protective;
    if (lower == "economic") return StandFunction::Economic;
    throw Error("unknown stand function '" + text + "'");
}

double ForestStand::cover_sum() const {
    double sum = 0.0;
    for (const auto& share : shares) sum += share.cover;
    return sum;
}

int Dataset::position_of(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
}

void Dataset::rebuild_index() {
    index.clear();
    index.reserve(stands.size());
    for (size_t i = 0; i < stands.size(); ++i) index[stands[i].id] = static_cast<int>(i);
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

double stand_volume(const ForestStand& stand) {
    double per_ha = 0.0;
    for (const auto& share : stand.shares) per_ha += share.standing_volume;
    return per_ha * stand.area;
}

Dataset parse_stands(const std::string& path, ParseMode mode,
                     std::vector<ValidationNote>* notes) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stands file '" + path + "'");
    return parse_stands_stream(in, mode, notes);
}

Dataset parse_stands_stream(std::istream& in, ParseMode mode,
                            std::vector<ValidationNote>* notes) {
    auto warn = [notes](const std::string& id, const std::string& message) {
        if (notes) notes->push_back({"warning", id, message});
    };

    std::string line;
    if (!std::getline(in, line)) throw EmptyDataset("stands file is empty");
    // Tolerate a UTF-8 BOM on the header.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    std::array<int, 8> col{};
    col.fill(-1);
    for (size_t i = 0; i < header.size(); ++i) {
        auto it = std::find(kColumns.begin(), kColumns.end(), header[i]);
        if (it == kColumns.end())
            throw MalformedRow(1, header[i], "unknown column in header");
        col[static_cast<size_t>(it - kColumns.begin())] = static_cast<int>(i);
    }
    for (size_t c = 0; c < kColumns.size(); ++c)
        if (col[c] < 0) throw MalformedRow(1, kColumns[c], "missing column in header");

    Dataset dataset;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw MalformedRow(line_no, "",
                               "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));

        const std::string& id = fields[static_cast<size_t>(col[0])];
        const std::string& habitat = fields[static_cast<size_t>(col[1])];
        const double area = parse_number(fields[static_cast<size_t>(col[2])], line_no, "area_ha");
        const std::string& function_text = fields[static_cast<size_t>(col[3])];
        const std::string& species = fields[static_cast<size_t>(col[4])];
        const double cover = parse_number(fields[static_cast<size_t>(col[5])], line_no, "cover");
        const int age = parse_age(fields[static_cast<size_t>(col[6])], line_no);
        const double volume =
            parse_number(fields[static_cast<size_t>(col[7])], line_no, "volume_m3_per_ha");

        if (id.empty()) throw MalformedRow(line_no, "id", "empty stand id");
        if (habitat.empty()) throw MalformedRow(line_no, "habitat", "empty habitat");
        if (species.empty()) throw MalformedRow(line_no, "species", "empty species");
        if (area <= 0.0)
            throw MalformedRow(line_no, "area_ha", "area must be positive");
        if (cover < 0.0 || cover > 1.0)
            throw MalformedRow(line_no, "cover", "cover must be within [0, 1]");
        if (age < 0) throw MalformedRow(line_no, "age", "age must be non-negative");
        if (volume < 0.0)
            throw MalformedRow(line_no, "volume_m3_per_ha", "volume must be non-negative");
        if (!on_cover_grid(cover)) {
            if (mode == ParseMode::Strict)
                throw MalformedRow(line_no, "cover",
                                   "cover " + format_double(cover) + " is not on the 10% grid");
            warn(id, "cover " + format_double(cover) + " is not on the 10% grid");
        }

        StandFunction function;
        try {
            function = parse_function(function_text);
        } catch (const Error&) {
            throw MalformedRow(line_no, "function",
                               "'" + function_text + "' is not protective/economic");
        }

        const int pos = dataset.position_of(id);
        if (pos < 0) {
            ForestStand stand;
            stand.id = id;
            stand.habitat = habitat;
            stand.area = area;
            stand.function = function;
            stand.shares.push_back({species, cover, age, volume});
            dataset.index[id] = static_cast<int>(dataset.stands.size());
            dataset.stands.push_back(std::move(stand));
        } else {
            ForestStand& stand = dataset.stands[static_cast<size_t>(pos)];
            if (stand.habitat != habitat || stand.area != area || stand.function != function)
                throw DuplicateStandConflict("stand '" + id +
                                             "': rows disagree on habitat/area/function (line " +
                                             std::to_string(line_no) + ")");
            if (std::any_of(stand.shares.begin(), stand.shares.end(),
                            [&](const SpeciesShare& s) { return s.species == species; }))
                warn(id, "species '" + species + "' listed more than once");
            stand.shares.push_back({species, cover, age, volume});
        }
    }

    if (dataset.stands.empty()) throw EmptyDataset("stands file has no data rows");

    for (const auto& stand : dataset.stands) {
        const double sum = stand.cover_sum();
        if (sum > 1.0 + kCoverSumEps)
            throw DuplicateStandConflict("stand '" + stand.id + "': cover sum " +
                                         format_double(sum) + " exceeds 1");
        if (sum < 1.0 - kCoverSumEps)
            warn(stand.id, "cover sum " + format_double(sum) + " below 1");
    }
    return dataset;
}

void write_stands(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_stands_stream(dataset, out);
}

void write_stands_stream(const Dataset& dataset, std::ostream& out) {
    out << "id,habitat,area_ha,function,species,cover,age,volume_m3_per_ha\n";
    for (const auto& stand : dataset.stands) {
        for (const auto& share : stand.shares) {
            out << stand.id << ',' << stand.habitat << ',' << format_double(stand.area) << ','
                << to_string(stand.function) << ',' << share.species << ','
                << format_double(share.cover) << ',' << share.age << ','
                << format_double(share.standing_volume) << '\n';
        }
    }
}

}  // namespace nashforest
