#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

/// Gaussian blob generator emitting the raw 19-attribute incident CSV, so
/// synthetic data exercises the same ingest path as a real snapshot.
///
/// Blob dimensions map, in order, to geo_lon, geo_lat, geo_x, geo_y (exact
/// doubles), then hour, day-of-year, district_id, precinct_id (quantized).
/// Unused mapped columns hold constants. Class c takes the c-th Denver
/// category name, so encoded class codes equal blob class indices.
struct SynthSpec {
    std::vector<long> counts;  // rows per class, in class order
    int dims = 2;              // 1..8
    double spread = 1.0;       // per-dimension normal noise scale
    uint64_t seed = 0;
    bool leaky = false;        // offense_code/offense_type_id encode the class
};

/// Class centers drawn uniformly from [-10, 10]^dims on a per-class stream;
/// identical specs produce identical bytes.
void write_synthetic_csv(const SynthSpec& spec, std::ostream& out);
void generate_synthetic_csv(const SynthSpec& spec, const std::string& path);

}  // namespace crimelab
