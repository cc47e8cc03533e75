#pragma once

#include <map>
#include <string>
#include <vector>

#include "crimelab/csv.hpp"
#include "crimelab/table.hpp"

namespace crimelab {

/// What to do with rows that have missing values in retained fields.
struct CleaningPolicy {
    enum class MissingRowAction { drop, sentinel };
    MissingRowAction missing_row_action = MissingRowAction::drop;
    double sentinel_value = -9999.0;
};

/// Row accounting across the ingest pipeline. The identity
///   input_rows = malformed + dropped_missing + dropped_label + emitted
/// holds after the full pipeline (sentinel-filled rows are emitted).
struct IngestReport {
    size_t input_rows = 0;
    size_t malformed_rows = 0;
    size_t dropped_missing_rows = 0;   // drop policy
    size_t sentinel_filled_rows = 0;   // sentinel policy; rows kept
    size_t dropped_label_rows = 0;     // missing target; dropped under either policy
    size_t emitted_rows = 0;
    std::map<std::string, size_t> malformed_reasons;
    std::map<std::string, size_t> missing_by_column;

    std::string to_json() const;
};

/// Tabular record batch between pipeline stages; empty cell = missing value.
struct RecordSet {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
    bool has_column(const std::string& name) const { return column(name) >= 0; }
};

struct DateParts {
    int year = 0, month = 0, day = 0, hour = 0;
};

/// Accepts "YYYY-MM-DD HH:MM[:SS]" (or with 'T') and "M/D/YYYY H:MM[:SS] AM|PM",
/// both with optional fractional seconds. Returns false if the text does not
/// parse or the fields are out of range.
bool parse_timestamp(const std::string& text, DateParts& out);

/// Validates the 19-attribute header (case-insensitive) and the per-row typed
/// invariants; rows failing them are counted in report.malformed_rows with a
/// reason and excluded from the result. Missing values pass through as empty
/// cells for the cleaning stage.
RecordSet parse_incident_records(const CsvTable& csv, IngestReport& report);
RecordSet parse_incident_csv(const std::string& path, IngestReport& report);

/// Removes last_occurrence_date and incident_address, then applies the
/// missing-value policy to the remaining fields. Rows with a missing
/// offense_category_id are always dropped (a sentinel there would mint a
/// phantom class).
void clean_columns(RecordSet& records, const CleaningPolicy& policy, IngestReport& report);

/// Projects onto the 13 modeling attributes, in canonical order. Idempotent.
void select_attributes(RecordSet& records);

/// Replaces reported_date with year/month/day/hour (24-hour clock, minutes
/// and seconds discarded), in place.
void decompose_reported_date(RecordSet& records, IngestReport& report);

/// Maps token columns (offense_type_id, neighborhood_id) to integer codes in
/// lexicographic token order, parses numeric columns, and splits off
/// offense_category_id as the label. More than 15 distinct label tokens is a
/// schema error naming the extras.
FeatureTable encode_categoricals(const RecordSet& records);

/// Full pipeline: parse, clean, select, decompose, encode.
FeatureTable ingest_csv(const std::string& path, const CleaningPolicy& policy,
                        IngestReport& report);

/// The 19 snapshot attribute names, in canonical order.
const std::vector<std::string>& incident_attribute_names();

/// The 15 Denver offense categories, in code (lexicographic) order.
const std::vector<std::string>& denver_category_names();

}  // namespace crimelab
