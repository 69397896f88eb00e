#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cluspath/core.hpp"

namespace cluspath::io {

// Column names of a long-format panel file: one row per (entity, time).
struct CsvSchema {
    std::string entity_column = "entity";
    std::string time_column = "time";
    // Empty selects every column other than the entity and time columns.
    std::vector<std::string> feature_columns;
};

// Throws DataError naming the offending line for malformed rows, duplicate
// (entity, time) pairs and non-numeric values.
Dataset load_long_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset read_long_csv(std::istream& in, const CsvSchema& schema = {});

// Writes `entity,time,f1..fd` with 17 significant digits.
void write_long_csv(std::ostream& out, const Dataset& ds,
                    const std::vector<std::string>& feature_names = {});

// Splits one CSV record, honoring double-quoted fields.
std::vector<std::string> split_csv_record(const std::string& line);

// Decimal form with 17 significant digits (round-trips exactly).
std::string format_double(double v);

}  // namespace cluspath::io
