#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "fairens/core.hpp"

namespace fairens {

/// Rectangular table of raw text cells, as read from disk. Typing is
/// deferred to the encoding step.
struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;  // rows x columns

    std::size_t n_rows() const { return cells.size(); }
    std::size_t n_cols() const { return columns.size(); }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j] == name) return j;
        throw DataError("no such column: " + name);
    }

    bool has_column(const std::string& name) const {
        for (const auto& c : columns)
            if (c == name) return true;
        return false;
    }
};

namespace detail {

// One RFC-4180 record; consumes the trailing line break. Returns false at EOF
// with no data consumed.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t row_no) {
    fields.clear();
    int ci = in.get();
    if (ci == EOF) return false;
    std::string field;
    bool in_quotes = false;
    bool record_done = false;
    while (!record_done) {
        if (ci == EOF) {
            if (in_quotes) throw DataError("unterminated quoted field on row " + std::to_string(row_no));
            break;
        }
        char c = static_cast<char>(ci);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else {
            switch (c) {
                case '"':
                    in_quotes = true;
                    break;
                case ',':
                    fields.push_back(std::move(field));
                    field.clear();
                    break;
                case '\r':
                    if (in.peek() == '\n') in.get();
                    [[fallthrough]];
                case '\n':
                    record_done = true;
                    break;
                default:
                    field.push_back(c);
            }
        }
        if (!record_done) ci = in.get();
    }
    fields.push_back(std::move(field));
    return true;
}

inline RawTable read_csv_stream(std::istream& in, bool has_header, const std::string& source) {
    RawTable t;
    std::vector<std::string> fields;
    bool first = true;
    std::size_t row_index = 0;
    while (read_csv_record(in, fields, row_index + 1)) {
        if (first) {
            first = false;
            if (has_header) {
                t.columns = fields;
                std::unordered_set<std::string> seen;
                for (const auto& c : t.columns)
                    if (!seen.insert(c).second) throw DataError("duplicate column name: " + c);
                continue;
            }
            t.columns.resize(fields.size());
            for (std::size_t j = 0; j < fields.size(); ++j) t.columns[j] = "c" + std::to_string(j);
        }
        ++row_index;
        if (fields.size() != t.columns.size())
            throw DataError("ragged row " + std::to_string(row_index) + " in " + source + ": expected " +
                            std::to_string(t.columns.size()) + " cells, got " + std::to_string(fields.size()));
        t.cells.push_back(fields);
    }
    if (t.columns.empty()) throw DataError("empty CSV input: " + source);
    return t;
}

}  // namespace detail

/// Read a CSV file (RFC-4180 quoting, UTF-8). Ragged rows are an error that
/// names the offending 1-based data row.
inline RawTable load_csv(const std::string& path, bool has_header = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    return detail::read_csv_stream(in, has_header, path);
}

inline RawTable parse_csv_text(const std::string& text, bool has_header = true) {
    std::istringstream in(text);
    return detail::read_csv_stream(in, has_header, "<string>");
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace fairens
