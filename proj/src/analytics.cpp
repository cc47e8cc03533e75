#include "crimelab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "crimelab/csv.hpp"

namespace crimelab {

namespace {

// Axis bound to either a feature column or the label vector.
struct AxisRef {
    std::string name;
    int col = -1;  // -1: label codes
};

const char* const kPivotAxes[] = {"hour", "month", "day", "year", "district_id", "category"};

AxisRef resolve_axis(const FeatureTable& table, const std::string& name, bool pivot_axis) {
    if (pivot_axis) {
        const bool known = std::any_of(std::begin(kPivotAxes), std::end(kPivotAxes),
                                       [&](const char* a) { return name == a; });
        if (!known) {
            throw ConfigError("unknown pivot axis \"" + name +
                              "\" (use hour, month, day, year, district_id, or category)");
        }
    }
    AxisRef ref;
    ref.name = name;
    if (name == "category") return ref;
    ref.col = table.column_index(name);
    if (ref.col < 0) {
        throw ConfigError("axis or filter column \"" + name + "\" is not in the table");
    }
    return ref;
}

double axis_value(const FeatureTable& table, const AxisRef& ref, size_t row) {
    if (ref.col < 0) return static_cast<double>(table.labels[row]);
    return table.matrix.at(row, static_cast<size_t>(ref.col));
}

int64_t integral_key(double v, const std::string& axis, size_t row) {
    const double r = std::floor(v);
    if (r != v || std::fabs(v) > 9.0e15) {
        std::ostringstream os;
        os << "axis " << axis << " has non-integral value " << v << " at row " << row;
        throw DataError(os.str());
    }
    return static_cast<int64_t>(r);
}

std::string describe_filters(const std::vector<AxisFilter>& filters) {
    std::string desc;
    for (const AxisFilter& f : filters) {
        if (!desc.empty()) desc += " and ";
        desc += f.column + "=" + format_compact(f.value);
    }
    return desc;
}

std::vector<AxisRef> resolve_filters(const FeatureTable& table,
                                     const std::vector<AxisFilter>& filters) {
    std::vector<AxisRef> refs;
    refs.reserve(filters.size());
    for (const AxisFilter& f : filters) refs.push_back(resolve_axis(table, f.column, false));
    return refs;
}

bool row_passes(const FeatureTable& table, const std::vector<AxisFilter>& filters,
                const std::vector<AxisRef>& refs, size_t row) {
    for (size_t i = 0; i < filters.size(); ++i) {
        if (axis_value(table, refs[i], row) != filters[i].value) return false;
    }
    return true;
}

bool is_leap(int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int64_t y, int64_t m) {
    static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) return 0;
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

struct Ymd {
    int64_t y = 0, m = 0, d = 0;
    bool operator<(const Ymd& o) const {
        if (y != o.y) return y < o.y;
        if (m != o.m) return m < o.m;
        return d < o.d;
    }
    bool operator<=(const Ymd& o) const { return !(o < *this); }
};

}  // namespace

double PivotTable::total() const {
    double s = 0.0;
    for (double v : cells.data) s += v;
    return s;
}

int64_t PivotTable::modal_row_key() const {
    if (row_keys.empty()) throw DataError("empty pivot table");
    size_t best = 0;
    double best_total = -1.0;
    for (size_t r = 0; r < row_keys.size(); ++r) {
        double t = 0.0;
        for (size_t c = 0; c < cells.cols; ++c) t += cells.at(r, c);
        if (t > best_total) {
            best_total = t;
            best = r;
        }
    }
    return row_keys[best];
}

int64_t PivotTable::minimal_row_key() const {
    if (row_keys.empty()) throw DataError("empty pivot table");
    size_t best = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < row_keys.size(); ++r) {
        double t = 0.0;
        for (size_t c = 0; c < cells.cols; ++c) t += cells.at(r, c);
        if (t < best_total) {
            best_total = t;
            best = r;
        }
    }
    return row_keys[best];
}

uint64_t GeoGrid::total() const {
    uint64_t s = 0;
    for (const auto& [cell, count] : cells) s += count;
    return s;
}

PivotTable pivot_counts(const FeatureTable& table, const std::string& row_axis,
                        const std::string& col_axis,
                        const std::vector<AxisFilter>& filters) {
    const AxisRef row_ref = resolve_axis(table, row_axis, true);
    const bool crossed = !col_axis.empty();
    const AxisRef col_ref = crossed ? resolve_axis(table, col_axis, true) : AxisRef{};
    const std::vector<AxisRef> filter_refs = resolve_filters(table, filters);

    PivotTable out;
    out.row_axis = row_axis;
    out.col_axis = col_axis;
    out.filter_desc = describe_filters(filters);
    out.input_rows = table.n_rows();

    std::map<std::pair<int64_t, int64_t>, uint64_t> counts;
    for (size_t i = 0; i < table.n_rows(); ++i) {
        if (!row_passes(table, filters, filter_refs, i)) continue;
        ++out.filtered_rows;
        const int64_t rk = integral_key(axis_value(table, row_ref, i), row_axis, i);
        const int64_t ck =
            crossed ? integral_key(axis_value(table, col_ref, i), col_axis, i) : 0;
        ++counts[{rk, ck}];
    }

    for (const auto& [key, count] : counts) {
        out.row_keys.push_back(key.first);
        if (crossed) out.col_keys.push_back(key.second);
    }
    std::sort(out.row_keys.begin(), out.row_keys.end());
    out.row_keys.erase(std::unique(out.row_keys.begin(), out.row_keys.end()),
                       out.row_keys.end());
    std::sort(out.col_keys.begin(), out.col_keys.end());
    out.col_keys.erase(std::unique(out.col_keys.begin(), out.col_keys.end()),
                       out.col_keys.end());

    out.cells = Matrix(out.row_keys.size(), std::max<size_t>(1, out.col_keys.size()));
    for (const auto& [key, count] : counts) {
        const size_t r = static_cast<size_t>(
            std::lower_bound(out.row_keys.begin(), out.row_keys.end(), key.first) -
            out.row_keys.begin());
        const size_t c =
            crossed ? static_cast<size_t>(std::lower_bound(out.col_keys.begin(),
                                                           out.col_keys.end(), key.second) -
                                          out.col_keys.begin())
                    : 0;
        out.cells.at(r, c) = static_cast<double>(count);
    }
    return out;
}

PivotTable daily_average(const FeatureTable& table,
                         const std::vector<AxisFilter>& filters) {
    const AxisRef year_ref = resolve_axis(table, "year", false);
    const AxisRef month_ref = resolve_axis(table, "month", false);
    const AxisRef day_ref = resolve_axis(table, "day", false);
    const std::vector<AxisRef> filter_refs = resolve_filters(table, filters);

    PivotTable out;
    out.row_axis = "calendar_day";
    out.value_name = "average";
    out.filter_desc = describe_filters(filters);
    out.input_rows = table.n_rows();

    std::map<std::pair<int64_t, int64_t>, uint64_t> counts;  // (month, day)
    Ymd lo, hi;
    bool any = false;
    for (size_t i = 0; i < table.n_rows(); ++i) {
        if (!row_passes(table, filters, filter_refs, i)) continue;
        ++out.filtered_rows;
        const Ymd date{integral_key(axis_value(table, year_ref, i), "year", i),
                       integral_key(axis_value(table, month_ref, i), "month", i),
                       integral_key(axis_value(table, day_ref, i), "day", i)};
        if (date.m < 1 || date.m > 12 || date.d < 1 || date.d > days_in_month(date.y, date.m)) {
            std::ostringstream os;
            os << "row " << i << " has invalid calendar date " << date.y << "-" << date.m
               << "-" << date.d;
            throw DataError(os.str());
        }
        ++counts[{date.m, date.d}];
        if (!any) {
            lo = hi = date;
            any = true;
        } else {
            if (date < lo) lo = date;
            if (hi < date) hi = date;
        }
    }
    if (!any) {
        out.cells = Matrix(0, 1);
        return out;
    }

    // Every (month, day) that exists in at least one window year, count 0 when
    // no incidents landed on it.
    std::vector<double> averages;
    for (int64_t m = 1; m <= 12; ++m) {
        for (int64_t d = 1; d <= 31; ++d) {
            int denom = 0;
            for (int64_t y = lo.y; y <= hi.y; ++y) {
                if (d > days_in_month(y, m)) continue;
                const Ymd date{y, m, d};
                if (lo <= date && date <= hi) ++denom;
            }
            if (denom == 0) continue;
            const auto it = counts.find({m, d});
            const double total = it == counts.end() ? 0.0 : static_cast<double>(it->second);
            out.row_keys.push_back(m * 100 + d);
            averages.push_back(total / static_cast<double>(denom));
        }
    }
    out.cells = Matrix(out.row_keys.size(), 1);
    for (size_t r = 0; r < averages.size(); ++r) out.cells.at(r, 0) = averages[r];
    return out;
}

GeoGrid geo_grid_counts(const FeatureTable& table, double cell_size,
                        const std::vector<AxisFilter>& filters, double sentinel,
                        const std::optional<GeoBounds>& bounds) {
    if (!(cell_size > 0.0)) throw ConfigError("grid cell size must be positive");
    const int lat_col = table.column_index("geo_lat");
    const int lon_col = table.column_index("geo_lon");
    if (lat_col < 0 || lon_col < 0) {
        throw SchemaError("geo grid needs geo_lat and geo_lon columns");
    }
    const std::vector<AxisRef> filter_refs = resolve_filters(table, filters);

    GeoGrid grid;
    grid.cell_size = cell_size;
    grid.filter_desc = describe_filters(filters);
    grid.input_rows = table.n_rows();

    bool any = false;
    GeoBounds seen;
    for (size_t i = 0; i < table.n_rows(); ++i) {
        if (!row_passes(table, filters, filter_refs, i)) continue;
        ++grid.filtered_rows;
        const double lat = table.matrix.at(i, static_cast<size_t>(lat_col));
        const double lon = table.matrix.at(i, static_cast<size_t>(lon_col));
        if (lat == sentinel || lon == sentinel || !std::isfinite(lat) || !std::isfinite(lon)) {
            ++grid.excluded_missing;
            continue;
        }
        if (bounds && (lat < bounds->lat_min || lat > bounds->lat_max ||
                       lon < bounds->lon_min || lon > bounds->lon_max)) {
            ++grid.excluded_outside;
            continue;
        }
        const int64_t ci = static_cast<int64_t>(std::floor(lat / cell_size));
        const int64_t cj = static_cast<int64_t>(std::floor(lon / cell_size));
        ++grid.cells[{ci, cj}];
        if (!any) {
            seen = GeoBounds{lat, lat, lon, lon};
            any = true;
        } else {
            seen.lat_min = std::min(seen.lat_min, lat);
            seen.lat_max = std::max(seen.lat_max, lat);
            seen.lon_min = std::min(seen.lon_min, lon);
            seen.lon_max = std::max(seen.lon_max, lon);
        }
    }
    grid.bounds = bounds ? *bounds : seen;
    return grid;
}

void export_pivot_csv(const std::string& path, const PivotTable& pivot,
                      const std::vector<std::string>& class_names) {
    CsvTable csv;
    const bool calendar = pivot.row_axis == "calendar_day";
    const bool crossed = !pivot.col_axis.empty();
    const bool named_rows = pivot.row_axis == "category" && !class_names.empty();

    if (calendar) {
        csv.header = {"month", "day", pivot.value_name};
    } else {
        csv.header.push_back(pivot.row_axis);
        if (named_rows) csv.header.push_back("category_name");
        if (crossed) {
            for (int64_t key : pivot.col_keys) {
                if (pivot.col_axis == "category" && key >= 0 &&
                    static_cast<size_t>(key) < class_names.size()) {
                    csv.header.push_back(class_names[static_cast<size_t>(key)]);
                } else {
                    csv.header.push_back(pivot.col_axis + "_" + std::to_string(key));
                }
            }
        } else {
            csv.header.push_back(pivot.value_name);
        }
    }

    for (size_t r = 0; r < pivot.row_keys.size(); ++r) {
        std::vector<std::string> row;
        const int64_t key = pivot.row_keys[r];
        if (calendar) {
            row.push_back(std::to_string(key / 100));
            row.push_back(std::to_string(key % 100));
        } else {
            row.push_back(std::to_string(key));
            if (named_rows) {
                row.push_back(key >= 0 && static_cast<size_t>(key) < class_names.size()
                                  ? class_names[static_cast<size_t>(key)]
                                  : std::string());
            }
        }
        for (size_t c = 0; c < pivot.cells.cols; ++c) {
            row.push_back(format_compact(pivot.cells.at(r, c)));
        }
        csv.rows.push_back(std::move(row));
    }
    write_csv_file(path, csv);
}

void export_geogrid_geojson(const std::string& path, const GeoGrid& grid) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& [cell, count] : grid.cells) {
        const double lat0 = static_cast<double>(cell.first) * grid.cell_size;
        const double lat1 = static_cast<double>(cell.first + 1) * grid.cell_size;
        const double lon0 = static_cast<double>(cell.second) * grid.cell_size;
        const double lon1 = static_cast<double>(cell.second + 1) * grid.cell_size;
        nlohmann::json feature;
        feature["type"] = "Feature";
        feature["geometry"] = {
            {"type", "Polygon"},
            {"coordinates",
             {{{lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1}, {lon0, lat0}}}}};
        feature["properties"] = {
            {"count", count}, {"cell_lat", cell.first}, {"cell_lon", cell.second}};
        features.push_back(std::move(feature));
    }
    nlohmann::json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    doc["metadata"] = {{"cell_size", grid.cell_size},
                       {"filter", grid.filter_desc},
                       {"input_rows", grid.input_rows},
                       {"filtered_rows", grid.filtered_rows},
                       {"excluded_missing", grid.excluded_missing},
                       {"excluded_outside", grid.excluded_outside},
                       {"bounds",
                        {{"lat_min", grid.bounds.lat_min},
                         {"lat_max", grid.bounds.lat_max},
                         {"lon_min", grid.bounds.lon_min},
                         {"lon_max", grid.bounds.lon_max}}}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace crimelab
