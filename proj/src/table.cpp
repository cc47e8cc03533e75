#include "crimelab/table.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "binio.hpp"
#include "crimelab/csv.hpp"

namespace crimelab {

int FeatureTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < column_names.size(); ++i) {
        if (column_names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

void FeatureTable::validate() const {
    size_t d = matrix.cols;
    if (column_names.size() != d || column_kinds.size() != d) {
        throw DataError("column metadata does not match matrix width");
    }
    if (labels.size() != matrix.rows) {
        throw DataError("label count does not match row count");
    }
    for (double v : matrix.data) {
        if (!std::isfinite(v)) throw DataError("non-finite value in feature matrix");
    }
    int k = n_classes();
    for (int label : labels) {
        if (label < 0 || label >= k) {
            throw DataError("label code out of range: " + std::to_string(label));
        }
    }
    for (const auto& [col, mapping] : code_maps) {
        if (column_index(col) < 0 && col != "offense_category_id") {
            throw DataError("code map for unknown column " + col);
        }
        std::map<int, std::string> inverse;
        for (const auto& [token, code] : mapping) {
            if (!inverse.emplace(code, token).second) {
                throw DataError("code collision in column " + col);
            }
        }
    }
}

FeatureTable FeatureTable::select_rows(const std::vector<size_t>& rows) const {
    FeatureTable out = *this;
    out.matrix = take_rows(matrix, rows);
    out.labels = take(labels, rows);
    return out;
}

FeatureTable FeatureTable::drop_columns(const std::vector<std::string>& names) const {
    std::vector<size_t> keep;
    for (size_t i = 0; i < column_names.size(); ++i) {
        bool dropped = false;
        for (const auto& name : names) {
            if (column_names[i] == name) { dropped = true; break; }
        }
        if (!dropped) keep.push_back(i);
    }
    if (column_names.size() - keep.size() != names.size()) {
        throw DataError("drop_columns: a named column is absent");
    }
    FeatureTable out;
    out.matrix = take_cols(matrix, keep);
    for (size_t i : keep) {
        out.column_names.push_back(column_names[i]);
        out.column_kinds.push_back(column_kinds[i]);
    }
    out.labels = labels;
    out.class_names = class_names;
    for (const auto& [col, mapping] : code_maps) {
        if (out.column_index(col) >= 0) out.code_maps[col] = mapping;
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'C', 'L', 'F', 'T'};
constexpr uint32_t kVersion = 1;

using namespace binio;

}  // namespace

void save_table(const FeatureTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u64(out, table.matrix.rows);
    put_u64(out, table.matrix.cols);
    for (size_t j = 0; j < table.matrix.cols; ++j) {
        put_str(out, table.column_names[j]);
        out.put(static_cast<char>(table.column_kinds[j]));
    }
    // Column-major payload: each feature column contiguous.
    for (size_t j = 0; j < table.matrix.cols; ++j) {
        for (size_t r = 0; r < table.matrix.rows; ++r) put_f64(out, table.matrix.at(r, j));
    }
    for (int label : table.labels) put_u32(out, static_cast<uint32_t>(label));
    put_u32(out, static_cast<uint32_t>(table.class_names.size()));
    for (const auto& name : table.class_names) put_str(out, name);
    put_u32(out, static_cast<uint32_t>(table.code_maps.size()));
    for (const auto& [col, mapping] : table.code_maps) {
        put_str(out, col);
        put_u32(out, static_cast<uint32_t>(mapping.size()));
        for (const auto& [token, code] : mapping) {
            put_str(out, token);
            put_u32(out, static_cast<uint32_t>(code));
        }
    }
    if (!out) throw DataError("write failed for " + path);
}

FeatureTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError(path + " is not a feature table file");
    }
    uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw DataError("unsupported table version " + std::to_string(version));
    }
    FeatureTable table;
    uint64_t rows = get_u64(in);
    uint64_t cols = get_u64(in);
    table.matrix = Matrix(rows, cols);
    for (uint64_t j = 0; j < cols; ++j) {
        table.column_names.push_back(get_str(in));
        int kind = in.get();
        if (kind != 0 && kind != 1) throw DataError("bad column kind");
        table.column_kinds.push_back(static_cast<ColumnKind>(kind));
    }
    for (uint64_t j = 0; j < cols; ++j) {
        for (uint64_t r = 0; r < rows; ++r) table.matrix.at(r, j) = get_f64(in);
    }
    table.labels.resize(rows);
    for (uint64_t r = 0; r < rows; ++r) table.labels[r] = static_cast<int>(get_u32(in));
    uint32_t n_classes = get_u32(in);
    for (uint32_t i = 0; i < n_classes; ++i) table.class_names.push_back(get_str(in));
    uint32_t n_maps = get_u32(in);
    for (uint32_t i = 0; i < n_maps; ++i) {
        std::string col = get_str(in);
        uint32_t entries = get_u32(in);
        auto& mapping = table.code_maps[col];
        for (uint32_t e = 0; e < entries; ++e) {
            std::string token = get_str(in);
            mapping[token] = static_cast<int>(get_u32(in));
        }
    }
    table.validate();
    return table;
}

namespace {

// Shortest decimal form that round-trips; integers print without a point.
std::string format_value(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void export_table_csv(const FeatureTable& table, const std::string& csv_path,
                      const std::string& extra_sidecar_json) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + csv_path);
    std::vector<std::string> header = table.column_names;
    header.push_back("offense_category_id");
    write_csv_row(out, header);
    std::vector<std::string> row(header.size());
    for (size_t r = 0; r < table.n_rows(); ++r) {
        for (size_t j = 0; j < table.n_features(); ++j) {
            row[j] = format_value(table.matrix.at(r, j));
        }
        row.back() = table.class_names.at(static_cast<size_t>(table.labels[r]));
        write_csv_row(out, row);
    }
    if (!out) throw DataError("write failed for " + csv_path);

    nlohmann::json sidecar;
    sidecar["rows"] = table.n_rows();
    sidecar["features"] = table.n_features();
    nlohmann::json columns = nlohmann::json::array();
    for (size_t j = 0; j < table.n_features(); ++j) {
        columns.push_back({{"name", table.column_names[j]},
                           {"kind", table.column_kinds[j] == ColumnKind::numeric
                                        ? "numeric"
                                        : "categorical-coded"}});
    }
    sidecar["columns"] = columns;
    sidecar["class_names"] = table.class_names;
    nlohmann::json maps = nlohmann::json::object();
    for (const auto& [col, mapping] : table.code_maps) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [token, code] : mapping) m[token] = code;
        maps[col] = m;
    }
    sidecar["code_maps"] = maps;
    if (!extra_sidecar_json.empty()) {
        nlohmann::json extra = nlohmann::json::parse(extra_sidecar_json);
        for (auto& [key, value] : extra.items()) sidecar[key] = value;
    }
    std::ofstream side(csv_path + ".json", std::ios::binary);
    if (!side) throw DataError("cannot write " + csv_path + ".json");
    side << sidecar.dump(2) << "\n";
}

}  // namespace crimelab
