#pragma once

#include "ldao/dataset.hpp"

#include <filesystem>
#include <string>
#include <variant>

namespace ldao {

// CSV layout. The target selector names one column, either by header name
// or by zero-based index. Headerless files require index selection.
struct CsvSchema {
    char delimiter = ',';
    bool has_header = true;
    std::variant<std::string, int> target = std::string("");
};

// Reads an RFC-4180-style CSV (quoted fields, doubled quotes, embedded
// delimiters/newlines inside quotes, UTF-8 passthrough). All non-target
// columns become features in file order; the synthetic mask starts false.
// NaN/Inf tokens are rejected so the pipeline can assume finite data.
// Throws EmptyFile, RaggedRow, MissingTarget, NonNumericCell, ValidationError.
Dataset read_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Reads one numeric column as a vector, same selector rules as read_csv.
// A single-column file may keep the default empty selector; multi-column
// files must name or index the column.
Eigen::VectorXd read_column(const std::filesystem::path& path, const CsvSchema& schema);

// Writes header feature_names + target_name (+ trailing "synthetic" 0/1
// column when mark_synthetic). Numbers use 17 significant digits, which
// round-trips doubles exactly. Throws IoError on write failure.
void write_csv(const Dataset& ds, const std::filesystem::path& path,
               bool mark_synthetic = false, char delimiter = ',');

} // namespace ldao
