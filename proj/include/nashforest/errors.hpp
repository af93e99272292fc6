#pragma once

#include <stdexcept>
#include <string>

namespace nashforest {

// Base for all recoverable errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A CSV row that cannot be parsed. Carries the 1-based line number
// (counting the header as line 1) and the offending column name.
struct MalformedRow : Error {
    MalformedRow(int line_no, std::string column_name, const std::string& detail)
        : Error("line " + std::to_string(line_no) + ", column '" + column_name +
                "': " + detail),
          line(line_no),
          column(std::move(column_name)) {}
    int line;
    std::string column;
};

// Rows of the same stand id disagree on habitat/area/function, or the
// merged stand violates a cross-row invariant (e.g. cover sum > 1).
struct DuplicateStandConflict : Error {
    using Error::Error;
};

struct EmptyDataset : Error {
    using Error::Error;
};

// Growth table lacks the 20/30/40 knots needed for young-age extrapolation.
struct MissingKnots : Error {
    using Error::Error;
};

struct UnknownSpecies : Error {
    using Error::Error;
};

struct UnknownHabitat : Error {
    using Error::Error;
};

struct EmptyHarvestSet : Error {
    using Error::Error;
};

// Fewer stands outside the harvest set than swap candidates requested.
struct InsufficientComplement : Error {
    using Error::Error;
};

// Trajectory normalization needs a nonzero value in every initial series.
struct ZeroInitialIndicator : Error {
    using Error::Error;
};

}  // namespace nashforest
