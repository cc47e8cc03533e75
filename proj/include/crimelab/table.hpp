#pragma once

#include <map>
#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

enum class ColumnKind : uint8_t { numeric = 0, categorical = 1 };

/// Encoded dataset: numeric feature matrix, integer labels, and the metadata
/// needed to decode categorical columns back to tokens.
struct FeatureTable {
    std::vector<std::string> column_names;             // d entries
    std::vector<ColumnKind> column_kinds;              // d entries
    Matrix matrix;                                     // n x d
    std::vector<int> labels;                           // n entries, in [0, K)
    std::vector<std::string> class_names;              // K entries, code order
    std::map<std::string, std::map<std::string, int>> code_maps;  // column -> token -> code

    size_t n_rows() const { return matrix.rows; }
    size_t n_features() const { return matrix.cols; }
    int n_classes() const { return static_cast<int>(class_names.size()); }

    int column_index(const std::string& name) const;  // -1 if absent

    /// Checks internal consistency: shapes agree, every entry finite,
    /// labels within [0, K). Throws DataError on violation.
    void validate() const;

    /// New table with the given rows, in the given order.
    FeatureTable select_rows(const std::vector<size_t>& rows) const;

    /// New table without the named columns (missing names are an error).
    FeatureTable drop_columns(const std::vector<std::string>& names) const;
};

/// Binary column store, magic "CLFT". Exact round-trip of doubles and
/// metadata; identical tables serialize to identical bytes.
void save_table(const FeatureTable& table, const std::string& path);
FeatureTable load_table(const std::string& path);

/// CSV export: feature columns plus a final label column with decoded class
/// tokens. The JSON sidecar (path + ".json") carries column kinds, code maps,
/// class names, and any extra metadata the caller supplies (as-is).
void export_table_csv(const FeatureTable& table, const std::string& csv_path,
                      const std::string& extra_sidecar_json = "");

}  // namespace crimelab
