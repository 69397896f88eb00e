#include "cluspath/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include "cluspath/error.hpp"

namespace cluspath::io {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) {
        return false;
    }
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::string line_error(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    if (quoted) {
        throw DataError("unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

Dataset read_long_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_csv_record(line);
            break;
        }
    }
    if (header.empty()) {
        throw DataError("CSV input has no header row");
    }
    for (auto& h : header) {
        h = trim(h);
    }
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) {
        header[0].erase(0, 3);
    }

    auto column_of = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataError("CSV header has no column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t entity_col = column_of(schema.entity_column);
    const std::size_t time_col = column_of(schema.time_column);
    std::vector<std::size_t> feature_cols;
    if (schema.feature_columns.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c != entity_col && c != time_col) {
                feature_cols.push_back(c);
            }
        }
    } else {
        for (const auto& name : schema.feature_columns) {
            feature_cols.push_back(column_of(name));
        }
    }
    if (feature_cols.empty()) {
        throw DataError("CSV input needs at least one feature column");
    }

    std::vector<Observation> observations;
    std::map<std::pair<std::string, double>, std::size_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> fields;
        try {
            fields = split_csv_record(line);
        } catch (const DataError& e) {
            throw DataError(line_error(line_no, e.what()));
        }
        if (fields.size() != header.size()) {
            throw DataError(line_error(line_no, "expected " + std::to_string(header.size()) +
                                                    " fields, found " +
                                                    std::to_string(fields.size())));
        }
        Observation obs;
        obs.entity = trim(fields[entity_col]);
        if (!parse_number(fields[time_col], obs.time) || !std::isfinite(obs.time)) {
            throw DataError(line_error(line_no, "time value '" + fields[time_col] +
                                                    "' is not a finite number"));
        }
        obs.descriptor.reserve(feature_cols.size());
        for (std::size_t c : feature_cols) {
            double v = 0.0;
            if (!parse_number(fields[c], v) || !std::isfinite(v)) {
                throw DataError(line_error(line_no, "feature '" + header[c] + "' value '" +
                                                        fields[c] + "' is not a finite number"));
            }
            obs.descriptor.push_back(v);
        }
        auto [it, inserted] = seen.try_emplace({obs.entity, obs.time}, line_no);
        if (!inserted) {
            throw DataError(line_error(line_no, "duplicate (entity, time) = (" + obs.entity + ", " +
                                                    trim(fields[time_col]) +
                                                    "), first seen on line " +
                                                    std::to_string(it->second)));
        }
        observations.push_back(std::move(obs));
    }
    if (observations.empty()) {
        throw DataError("CSV input has a header but no data rows");
    }
    return Dataset::from_observations(observations);
}

Dataset load_long_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    return read_long_csv(in, schema);
}

void write_long_csv(std::ostream& out, const Dataset& ds,
                    const std::vector<std::string>& feature_names) {
    out << "entity,time";
    for (std::size_t f = 0; f < ds.dim(); ++f) {
        out << ','
            << (f < feature_names.size() ? quote_if_needed(feature_names[f])
                                         : "f" + std::to_string(f + 1));
    }
    out << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << quote_if_needed(ds.entity_id(ds.entity_of(i))) << ',' << format_double(ds.time(i));
        for (double v : ds.descriptor(i)) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

}  // namespace cluspath::io
