#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crimelab/common.hpp"
#include "crimelab/table.hpp"

namespace crimelab {

/// One equality condition; a filter is the conjunction of several. `column`
/// names a feature column, or "category" to match the label code.
struct AxisFilter {
    std::string column;
    double value = 0.0;
};

/// Grouped counts (or averages) over one axis, optionally crossed with a
/// second. Keys are the integral axis values; for "category" they are class
/// codes.
struct PivotTable {
    std::string row_axis;
    std::string col_axis;               // empty: single value column
    std::string value_name = "count";   // "count" or "average"
    std::vector<int64_t> row_keys;      // ascending
    std::vector<int64_t> col_keys;      // ascending; empty when col_axis is
    Matrix cells;                       // row_keys.size() x max(1, col_keys.size())
    std::string filter_desc;
    uint64_t input_rows = 0;
    uint64_t filtered_rows = 0;

    /// Sum over all cells.
    double total() const;
    /// Row key with the largest row total; ties go to the lower key.
    int64_t modal_row_key() const;
    /// Row key with the smallest row total; ties go to the lower key.
    int64_t minimal_row_key() const;
};

struct GeoBounds {
    double lat_min = 0.0, lat_max = 0.0;
    double lon_min = 0.0, lon_max = 0.0;
};

/// Sparse grid of incident counts over floor(lat / cell), floor(lon / cell)
/// cells.
struct GeoGrid {
    double cell_size = 0.0;
    GeoBounds bounds;  // of the counted rows, or the caller-supplied box
    std::map<std::pair<int64_t, int64_t>, uint64_t> cells;  // (lat idx, lon idx)
    std::string filter_desc;
    uint64_t input_rows = 0;
    uint64_t filtered_rows = 0;
    uint64_t excluded_missing = 0;  // sentinel or non-finite coordinates
    uint64_t excluded_outside = 0;  // outside a caller-supplied bounding box

    uint64_t total() const;
};

/// Exact group counts along `row_axis` (one of hour, month, day, year,
/// district_id, category), optionally crossed with `col_axis`. Filters apply
/// before counting. Unknown axis or filter column raises ConfigError.
PivotTable pivot_counts(const FeatureTable& table, const std::string& row_axis,
                        const std::string& col_axis = std::string(),
                        const std::vector<AxisFilter>& filters = {});

/// Mean incidents per calendar day: for each (month, day), total count divided
/// by the number of window years (min data year .. max data year) in which
/// that date exists and falls inside the observed date range. Feb 29 averages
/// over leap years only. Row keys are month * 100 + day; days with no
/// incidents average 0.
PivotTable daily_average(const FeatureTable& table,
                         const std::vector<AxisFilter>& filters = {});

/// Counts filtered rows into cells of `cell_size` degrees. Rows whose
/// coordinates equal `sentinel` (or are non-finite) are excluded and counted
/// in excluded_missing; with an explicit `bounds`, rows outside it land in
/// excluded_outside. total() + both exclusions == filtered_rows.
GeoGrid geo_grid_counts(const FeatureTable& table, double cell_size,
                        const std::vector<AxisFilter>& filters = {},
                        double sentinel = -9999.0,
                        const std::optional<GeoBounds>& bounds = std::nullopt);

/// CSV with one row per row key. Single-column pivots write `row_axis,value`;
/// crossed pivots write one column per col key (class names label "category"
/// columns); calendar-day pivots write month,day,value.
void export_pivot_csv(const std::string& path, const PivotTable& pivot,
                      const std::vector<std::string>& class_names = {});

/// GeoJSON FeatureCollection of cell polygons with count properties, plus a
/// metadata foreign member (cell size, filter, exclusion counts).
void export_geogrid_geojson(const std::string& path, const GeoGrid& grid);

}  // namespace crimelab
