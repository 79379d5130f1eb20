#include "ldao/csv.hpp"

#include "ldao/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ldao {

namespace {

// Splits the whole file into records of fields. Quoted fields may contain
// delimiters, newlines, and doubled quotes. CRLF and LF both delimit rows.
std::vector<std::vector<std::string>> parse_records(const std::string& text, char delimiter) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        records.push_back(std::move(row));
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            in_quotes = true;
            row_started = true;
        } else if (c == delimiter) {
            end_field();
            row_started = true;
        } else if (c == '\n') {
            if (row_started || !field.empty() || !row.empty()) end_row();
        } else if (c == '\r') {
            // consumed; the following \n (if any) ends the row
            if (i + 1 >= text.size() || text[i + 1] != '\n') {
                if (row_started || !field.empty() || !row.empty()) end_row();
            }
        } else {
            field += c;
            row_started = true;
        }
    }
    if (in_quotes) throw ValidationError("unterminated quoted field at end of file");
    if (row_started || !field.empty() || !row.empty()) end_row();
    return records;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strict numeric parse: the whole token must be one finite number.
bool parse_number(const std::string& raw, double& out) {
    std::string token = trim(raw);
    if (token.empty()) return false;
    const char* begin = token.c_str();
    if (*begin == '+') ++begin;  // from_chars rejects an explicit plus
    const char* end = token.c_str() + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) return false;
    return std::isfinite(out);
}

bool needs_quoting(const std::string& s, char delimiter) {
    return s.find(delimiter) != std::string::npos || s.find('"') != std::string::npos ||
           s.find('\n') != std::string::npos || s.find('\r') != std::string::npos;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Parsed file plus resolved header; data rows start at records[first_data].
struct RawTable {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> header;  // synthesized c0..cN when headerless
    std::size_t first_data = 0;
};

RawTable load_table(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open \"" + path.string() + "\" for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();

    RawTable table;
    table.records = parse_records(buffer.str(), schema.delimiter);
    if (table.records.empty()) throw EmptyFile("\"" + path.string() + "\" contains no rows");

    if (schema.has_header) {
        table.header = table.records[0];
        for (auto& name : table.header) name = trim(name);
        table.first_data = 1;
    } else {
        table.header.resize(table.records[0].size());
        for (std::size_t j = 0; j < table.header.size(); ++j)
            table.header[j] = "c" + std::to_string(j);
    }
    if (table.records.size() <= table.first_data)
        throw EmptyFile("\"" + path.string() + "\" contains no data rows");
    return table;
}

int resolve_column(const RawTable& table, const CsvSchema& schema,
                   const std::filesystem::path& path) {
    const std::size_t width = table.header.size();
    if (std::holds_alternative<std::string>(schema.target)) {
        const std::string& name = std::get<std::string>(schema.target);
        if (!schema.has_header)
            throw MissingTarget("headerless files need an index-based target selector");
        for (std::size_t j = 0; j < width; ++j) {
            if (table.header[j] == name) return static_cast<int>(j);
        }
        throw MissingTarget("no column named \"" + name + "\" in \"" + path.string() + "\"");
    }
    const int idx = std::get<int>(schema.target);
    if (idx < 0 || static_cast<std::size_t>(idx) >= width)
        throw MissingTarget("target index " + std::to_string(idx) + " out of range (" +
                            std::to_string(width) + " columns)");
    return idx;
}

} // namespace

Dataset read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    const RawTable table = load_table(path, schema);
    const auto& records = table.records;
    const auto& header = table.header;
    const std::size_t first_data = table.first_data;
    const std::size_t width = header.size();
    const int target_col = resolve_column(table, schema, path);

    const std::size_t n = records.size() - first_data;
    const std::size_t d = width - 1;
    if (d == 0) throw ValidationError("dataset needs at least one feature column besides the target");

    Dataset ds;
    ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    ds.target.resize(static_cast<Eigen::Index>(n));
    ds.target_name = header[static_cast<std::size_t>(target_col)];
    for (std::size_t j = 0; j < width; ++j)
        if (static_cast<int>(j) != target_col) ds.feature_names.push_back(header[j]);
    ds.synthetic_mask.assign(n, false);

    for (std::size_t r = 0; r < n; ++r) {
        const auto& record = records[first_data + r];
        if (record.size() != width)
            throw RaggedRow("data row " + std::to_string(r + 1) + " has " +
                            std::to_string(record.size()) + " fields, expected " +
                            std::to_string(width));
        std::size_t feat = 0;
        for (std::size_t j = 0; j < width; ++j) {
            double value = 0.0;
            if (!parse_number(record[j], value))
                throw NonNumericCell("non-numeric cell \"" + record[j] + "\" at data row " +
                                     std::to_string(r + 1) + ", column \"" + header[j] + "\"");
            if (static_cast<int>(j) == target_col)
                ds.target[static_cast<Eigen::Index>(r)] = value;
            else
                ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(feat++)) = value;
        }
    }

    validate(ds);
    return ds;
}

Eigen::VectorXd read_column(const std::filesystem::path& path, const CsvSchema& schema) {
    const RawTable table = load_table(path, schema);
    const std::size_t width = table.header.size();

    int col = 0;
    const bool default_selector = std::holds_alternative<std::string>(schema.target) &&
                                  std::get<std::string>(schema.target).empty();
    if (default_selector) {
        if (width != 1)
            throw MissingTarget("\"" + path.string() + "\" has " + std::to_string(width) +
                                " columns; select one by name or index");
    } else {
        col = resolve_column(table, schema, path);
    }

    const std::size_t n = table.records.size() - table.first_data;
    Eigen::VectorXd values(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& record = table.records[table.first_data + r];
        if (record.size() != width)
            throw RaggedRow("data row " + std::to_string(r + 1) + " has " +
                            std::to_string(record.size()) + " fields, expected " +
                            std::to_string(width));
        double value = 0.0;
        if (!parse_number(record[static_cast<std::size_t>(col)], value))
            throw NonNumericCell("non-numeric cell \"" + record[static_cast<std::size_t>(col)] +
                                 "\" at data row " + std::to_string(r + 1) + ", column \"" +
                                 table.header[static_cast<std::size_t>(col)] + "\"");
        values[static_cast<Eigen::Index>(r)] = value;
    }
    return values;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path,
               bool mark_synthetic, char delimiter) {
    validate(ds);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open \"" + path.string() + "\" for writing");

    auto emit_name = [&](const std::string& name) {
        out << (needs_quoting(name, delimiter) ? quoted(name) : name);
    };

    for (std::size_t j = 0; j < ds.feature_names.size(); ++j) {
        if (j > 0) out << delimiter;
        emit_name(ds.feature_names[j]);
    }
    out << delimiter;
    emit_name(ds.target_name);
    if (mark_synthetic) out << delimiter << "synthetic";
    out << '\n';

    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.dims(); ++j) {
            if (j > 0) out << delimiter;
            out << format_value(ds.features(i, j));
        }
        out << delimiter << format_value(ds.target[i]);
        if (mark_synthetic)
            out << delimiter << (ds.synthetic_mask[static_cast<std::size_t>(i)] ? '1' : '0');
        out << '\n';
    }

    out.flush();
    if (!out) throw IoError("failed writing \"" + path.string() + "\"");
}

} // namespace ldao
