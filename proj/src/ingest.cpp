#include "crimelab/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "crimelab/csv.hpp"

namespace crimelab {

namespace {

// Snapshot attribute names, canonical order.
const std::vector<std::string> kAllColumns = {
    "incident_id", "offense_id", "offense_code", "offense_code_extension",
    "offense_type_id", "offense_category_id", "first_occurrence_date",
    "last_occurrence_date", "reported_date", "incident_address",
    "geo_x", "geo_y", "geo_lon", "geo_lat",
    "district_id", "precinct_id", "neighborhood_id", "is_crime", "is_traffic"};

// The 13 modeling attributes, canonical order.
const std::vector<std::string> kSelectedColumns = {
    "offense_code", "offense_type_id", "offense_category_id", "reported_date",
    "geo_x", "geo_y", "geo_lon", "geo_lat",
    "district_id", "precinct_id", "neighborhood_id", "is_crime", "is_traffic"};

// Post-decomposition feature order; offense_category_id is the label.
const std::vector<std::pair<std::string, ColumnKind>> kEncodedColumns = {
    {"offense_code", ColumnKind::numeric},
    {"offense_type_id", ColumnKind::categorical},
    {"year", ColumnKind::numeric},
    {"month", ColumnKind::numeric},
    {"day", ColumnKind::numeric},
    {"hour", ColumnKind::numeric},
    {"geo_x", ColumnKind::numeric},
    {"geo_y", ColumnKind::numeric},
    {"geo_lon", ColumnKind::numeric},
    {"geo_lat", ColumnKind::numeric},
    {"district_id", ColumnKind::numeric},
    {"precinct_id", ColumnKind::numeric},
    {"neighborhood_id", ColumnKind::categorical},
    {"is_crime", ColumnKind::numeric},
    {"is_traffic", ColumnKind::numeric}};

bool parse_integral(const std::string& s, double& out) {
    double v;
    if (!parse_double(s, v)) return false;
    if (v != std::floor(v)) return false;
    out = v;
    return true;
}

struct Cursor {
    const char* p;
    const char* end;

    bool done() const { return p >= end; }
    bool eat(char c) {
        if (done() || *p != c) return false;
        ++p;
        return true;
    }
    // 1..4 digit integer
    bool number(int& out) {
        if (done() || *p < '0' || *p > '9') return false;
        long v = 0;
        int digits = 0;
        while (!done() && *p >= '0' && *p <= '9' && digits < 5) {
            v = v * 10 + (*p - '0');
            ++p;
            ++digits;
        }
        if (digits > 4) return false;
        out = static_cast<int>(v);
        return true;
    }
};

bool parse_time_of_day(Cursor& c, int meridiem, int& hour_out) {
    int h, mi, ss = 0;
    if (!c.number(h)) return false;
    if (!c.eat(':')) return false;
    if (!c.number(mi)) return false;
    if (c.eat(':')) {
        if (!c.number(ss)) return false;
        if (c.eat('.')) {  // fractional seconds, ignored
            int frac;
            if (!c.number(frac)) return false;
        }
    }
    if (!c.done()) return false;
    if (mi < 0 || mi > 59 || ss < 0 || ss > 59) return false;
    if (meridiem >= 0) {
        if (h < 1 || h > 12) return false;
        h %= 12;
        if (meridiem == 1) h += 12;
    } else if (h > 23) {
        return false;
    }
    hour_out = h;
    return true;
}

}  // namespace

bool parse_timestamp(const std::string& text, DateParts& out) {
    std::string s = trim(text);
    int meridiem = -1;  // 0 = AM, 1 = PM
    if (s.size() > 2) {
        std::string tail = to_lower(s.substr(s.size() - 2));
        if (tail == "am" || tail == "pm") {
            meridiem = tail == "pm" ? 1 : 0;
            s = trim(s.substr(0, s.size() - 2));
        }
    }
    size_t cut = s.find_first_of(" T");
    if (cut == std::string::npos) return false;
    std::string date = s.substr(0, cut);
    std::string time = trim(s.substr(cut + 1));

    int year, month, day;
    Cursor dc{date.data(), date.data() + date.size()};
    if (date.find('-') != std::string::npos) {
        if (!dc.number(year) || !dc.eat('-') || !dc.number(month) || !dc.eat('-') ||
            !dc.number(day) || !dc.done()) {
            return false;
        }
    } else if (date.find('/') != std::string::npos) {
        if (!dc.number(month) || !dc.eat('/') || !dc.number(day) || !dc.eat('/') ||
            !dc.number(year) || !dc.done()) {
            return false;
        }
    } else {
        return false;
    }
    if (year < 1 || month < 1 || month > 12 || day < 1 || day > 31) return false;

    Cursor tc{time.data(), time.data() + time.size()};
    int hour;
    if (!parse_time_of_day(tc, meridiem, hour)) return false;
    out = DateParts{year, month, day, hour};
    return true;
}

int RecordSet::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::string IngestReport::to_json() const {
    nlohmann::json j;
    j["input_rows"] = input_rows;
    j["malformed_rows"] = malformed_rows;
    j["dropped_missing_rows"] = dropped_missing_rows;
    j["sentinel_filled_rows"] = sentinel_filled_rows;
    j["dropped_label_rows"] = dropped_label_rows;
    j["emitted_rows"] = emitted_rows;
    j["malformed_reasons"] = malformed_reasons;
    j["missing_by_column"] = missing_by_column;
    return j.dump(2);
}

RecordSet parse_incident_records(const CsvTable& csv, IngestReport& report) {
    std::vector<int> source_index(kAllColumns.size(), -1);
    for (size_t h = 0; h < csv.header.size(); ++h) {
        std::string name = to_lower(trim(csv.header[h]));
        for (size_t i = 0; i < kAllColumns.size(); ++i) {
            if (name == kAllColumns[i]) {
                if (source_index[i] >= 0) throw SchemaError("duplicate column: " + kAllColumns[i]);
                source_index[i] = static_cast<int>(h);
            }
        }
    }
    for (size_t i = 0; i < kAllColumns.size(); ++i) {
        if (source_index[i] < 0) throw SchemaError("missing column: " + kAllColumns[i]);
    }

    RecordSet out;
    out.columns = kAllColumns;
    report.input_rows += csv.rows.size();

    auto malformed = [&](const std::string& reason) {
        ++report.malformed_rows;
        ++report.malformed_reasons[reason];
    };

    std::vector<std::string> cells(kAllColumns.size());
    for (const auto& raw : csv.rows) {
        for (size_t i = 0; i < kAllColumns.size(); ++i) {
            cells[i] = trim(raw[static_cast<size_t>(source_index[i])]);
        }
        auto cell = [&](const char* name) -> const std::string& {
            return cells[static_cast<size_t>(out.column(name))];
        };

        DateParts parts;
        if (!parse_timestamp(cell("reported_date"), parts)) {
            malformed("reported_date");
            continue;
        }
        double v;
        bool ok = true;
        for (const char* name : {"offense_code", "offense_code_extension",
                                 "district_id", "precinct_id"}) {
            const std::string& c = cell(name);
            if (!c.empty() && !parse_integral(c, v)) {
                malformed(name);
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (const char* name : {"geo_x", "geo_y", "geo_lon", "geo_lat"}) {
            const std::string& c = cell(name);
            if (!c.empty() && !parse_double(c, v)) {
                malformed(name);
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (const char* name : {"is_crime", "is_traffic"}) {
            const std::string& c = cell(name);
            if (!c.empty() && (!parse_double(c, v) || (v != 0.0 && v != 1.0))) {
                malformed(name);
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (cell("geo_lat").empty() != cell("geo_lon").empty()) {
            malformed("geo_pair");
            continue;
        }
        out.rows.push_back(cells);
    }
    return out;
}

RecordSet parse_incident_csv(const std::string& path, IngestReport& report) {
    CsvTable csv = read_csv_file(path);
    return parse_incident_records(csv, report);
}

void clean_columns(RecordSet& records, const CleaningPolicy& policy, IngestReport& report) {
    std::vector<size_t> keep;
    for (size_t i = 0; i < records.columns.size(); ++i) {
        const std::string& name = records.columns[i];
        if (name != "last_occurrence_date" && name != "incident_address") keep.push_back(i);
    }
    std::vector<std::string> kept_names;
    for (size_t i : keep) kept_names.push_back(records.columns[i]);

    std::string sentinel;
    {
        std::ostringstream os;
        os << policy.sentinel_value;
        sentinel = os.str();
    }

    int label_col = -1;
    for (size_t j = 0; j < kept_names.size(); ++j) {
        if (kept_names[j] == "offense_category_id") label_col = static_cast<int>(j);
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.rows.size());
    std::vector<std::string> cells(keep.size());
    for (auto& row : records.rows) {
        bool any_missing = false;
        bool label_missing = false;
        for (size_t j = 0; j < keep.size(); ++j) {
            cells[j] = std::move(row[keep[j]]);
            if (cells[j].empty()) {
                any_missing = true;
                if (static_cast<int>(j) == label_col) label_missing = true;
                ++report.missing_by_column[kept_names[j]];
            }
        }
        if (label_missing) {
            ++report.dropped_label_rows;
            continue;
        }
        if (any_missing) {
            if (policy.missing_row_action == CleaningPolicy::MissingRowAction::drop) {
                ++report.dropped_missing_rows;
                continue;
            }
            for (auto& c : cells) {
                if (c.empty()) c = sentinel;
            }
            ++report.sentinel_filled_rows;
        }
        rows.push_back(cells);
    }
    records.columns = std::move(kept_names);
    records.rows = std::move(rows);
}

void select_attributes(RecordSet& records) {
    std::vector<size_t> take_idx;
    for (const auto& name : kSelectedColumns) {
        int i = records.column(name);
        if (i < 0) throw SchemaError("missing column: " + name);
        take_idx.push_back(static_cast<size_t>(i));
    }
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.rows.size());
    std::vector<std::string> cells(take_idx.size());
    for (auto& row : records.rows) {
        for (size_t j = 0; j < take_idx.size(); ++j) cells[j] = std::move(row[take_idx[j]]);
        rows.push_back(cells);
    }
    records.columns = kSelectedColumns;
    records.rows = std::move(rows);
}

void decompose_reported_date(RecordSet& records, IngestReport& report) {
    int date_col = records.column("reported_date");
    if (date_col < 0) throw SchemaError("missing column: reported_date");
    size_t dc = static_cast<size_t>(date_col);

    std::vector<std::string> columns;
    for (size_t i = 0; i < records.columns.size(); ++i) {
        if (i == dc) {
            columns.insert(columns.end(), {"year", "month", "day", "hour"});
        } else {
            columns.push_back(records.columns[i]);
        }
    }
    std::vector<std::vector<std::string>> rows;
    rows.reserve(records.rows.size());
    for (auto& row : records.rows) {
        DateParts parts;
        if (!parse_timestamp(row[dc], parts)) {
            ++report.malformed_rows;
            ++report.malformed_reasons["reported_date"];
            continue;
        }
        std::vector<std::string> cells;
        cells.reserve(columns.size());
        for (size_t i = 0; i < row.size(); ++i) {
            if (i == dc) {
                cells.push_back(std::to_string(parts.year));
                cells.push_back(std::to_string(parts.month));
                cells.push_back(std::to_string(parts.day));
                cells.push_back(std::to_string(parts.hour));
            } else {
                cells.push_back(std::move(row[i]));
            }
        }
        rows.push_back(std::move(cells));
    }
    records.columns = std::move(columns);
    records.rows = std::move(rows);
}

FeatureTable encode_categoricals(const RecordSet& records) {
    int label_col = records.column("offense_category_id");
    if (label_col < 0) throw SchemaError("missing column: offense_category_id");

    std::vector<size_t> feature_src;
    for (const auto& [name, kind] : kEncodedColumns) {
        (void)kind;
        int i = records.column(name);
        if (i < 0) throw SchemaError("missing column: " + name);
        feature_src.push_back(static_cast<size_t>(i));
    }

    FeatureTable table;
    for (const auto& [name, kind] : kEncodedColumns) {
        table.column_names.push_back(name);
        table.column_kinds.push_back(kind);
    }

    // Label codes: lexicographic over the distinct tokens present.
    std::set<std::string> label_tokens;
    for (const auto& row : records.rows) label_tokens.insert(row[static_cast<size_t>(label_col)]);
    if (label_tokens.size() > 15) {
        const auto& canon = denver_category_names();
        std::string extras;
        for (const auto& token : label_tokens) {
            if (std::find(canon.begin(), canon.end(), token) == canon.end()) {
                if (!extras.empty()) extras += ", ";
                extras += token;
            }
        }
        throw SchemaError("more than 15 offense categories; unexpected: " + extras);
    }
    std::map<std::string, int> label_map;
    for (const auto& token : label_tokens) {
        int code = static_cast<int>(table.class_names.size());
        label_map[token] = code;
        table.class_names.push_back(token);
    }
    table.code_maps["offense_category_id"] = label_map;

    // Token columns: lexicographic code assignment per column.
    for (size_t f = 0; f < kEncodedColumns.size(); ++f) {
        if (kEncodedColumns[f].second != ColumnKind::categorical) continue;
        std::set<std::string> tokens;
        for (const auto& row : records.rows) tokens.insert(row[feature_src[f]]);
        auto& mapping = table.code_maps[kEncodedColumns[f].first];
        int next = 0;
        for (const auto& token : tokens) mapping[token] = next++;
    }

    table.matrix = Matrix(records.rows.size(), kEncodedColumns.size());
    table.labels.resize(records.rows.size());
    for (size_t r = 0; r < records.rows.size(); ++r) {
        const auto& row = records.rows[r];
        for (size_t f = 0; f < kEncodedColumns.size(); ++f) {
            const std::string& cell = row[feature_src[f]];
            if (kEncodedColumns[f].second == ColumnKind::categorical) {
                table.matrix.at(r, f) = table.code_maps[kEncodedColumns[f].first].at(cell);
            } else {
                double v;
                if (!parse_double(cell, v)) {
                    throw DataError("unparseable numeric value '" + cell + "' in column " +
                                    kEncodedColumns[f].first);
                }
                table.matrix.at(r, f) = v;
            }
        }
        table.labels[r] = label_map.at(row[static_cast<size_t>(label_col)]);
    }
    table.validate();
    return table;
}

FeatureTable ingest_csv(const std::string& path, const CleaningPolicy& policy,
                        IngestReport& report) {
    RecordSet records = parse_incident_csv(path, report);
    clean_columns(records, policy, report);
    select_attributes(records);
    decompose_reported_date(records, report);
    FeatureTable table = encode_categoricals(records);
    report.emitted_rows = table.n_rows();
    return table;
}

const std::vector<std::string>& incident_attribute_names() { return kAllColumns; }

const std::vector<std::string>& denver_category_names() {
    static const std::vector<std::string> names = {
        "aggravated-assault", "all-other-crimes", "arson", "auto-theft",
        "burglary", "drug-alcohol", "larceny", "murder",
        "other-crimes-against-persons", "public-disorder", "robbery",
        "sexual-assault", "theft-from-motor-vehicle", "traffic-accident",
        "white-collar-crime"};
    return names;
}

}  // namespace crimelab
