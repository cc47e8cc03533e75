#include "crimelab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "crimelab/csv.hpp"
#include "crimelab/ingest.hpp"

namespace crimelab {

namespace {

constexpr uint64_t kCenterStream = 0xCE2700;
constexpr uint64_t kRowStream = 0xB10B00;

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Day-of-year in 2016 (leap) to month/day.
void day_of_year_to_date(int doy, int& month, int& day) {
    static const int kDays[12] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    month = 1;
    while (doy > kDays[month - 1]) {
        doy -= kDays[month - 1];
        ++month;
    }
    day = doy;
}

std::string make_timestamp(int hour, int doy) {
    int month = 0, day = 0;
    day_of_year_to_date(doy, month, day);
    std::ostringstream os;
    os << "2016-" << std::setw(2) << std::setfill('0') << month << "-" << std::setw(2)
       << std::setfill('0') << day << " " << std::setw(2) << std::setfill('0') << hour
       << ":00:00";
    return os.str();
}

int clamp_int(double v, int lo, int hi) {
    const int i = static_cast<int>(std::floor(v));
    return std::max(lo, std::min(hi, i));
}

}  // namespace

void write_synthetic_csv(const SynthSpec& spec, std::ostream& out) {
    const size_t n_classes = spec.counts.size();
    if (n_classes == 0) throw ConfigError("synthetic spec needs at least one class count");
    if (n_classes > denver_category_names().size()) {
        throw ConfigError("synthetic spec supports at most " +
                          std::to_string(denver_category_names().size()) + " classes");
    }
    for (long c : spec.counts) {
        if (c < 1) throw ConfigError("every synthetic class count must be >= 1");
    }
    if (spec.dims < 1 || spec.dims > 8) {
        throw ConfigError("synthetic dims must be in [1, 8]");
    }
    if (!(spec.spread >= 0.0)) throw ConfigError("synthetic spread must be >= 0");

    const size_t d = static_cast<size_t>(spec.dims);
    std::vector<std::vector<double>> centers(n_classes, std::vector<double>(d));
    for (size_t c = 0; c < n_classes; ++c) {
        Rng rng(derive_seed(spec.seed, kCenterStream + c));
        for (size_t j = 0; j < d; ++j) centers[c][j] = -10.0 + 20.0 * rng.unit();
    }

    write_csv_row(out, incident_attribute_names());

    long id = 0;
    std::vector<double> v(d);
    for (size_t c = 0; c < n_classes; ++c) {
        Rng rng(derive_seed(spec.seed, kRowStream + c));
        const std::string& category = denver_category_names()[c];
        for (long r = 0; r < spec.counts[c]; ++r) {
            ++id;
            for (size_t j = 0; j < d; ++j) v[j] = centers[c][j] + spec.spread * rng.normal();

            const int hour = d >= 5 ? clamp_int(12.0 * (1.0 + v[4] / 20.0), 0, 23) : 12;
            const int doy = d >= 6 ? clamp_int(1.0 + 366.0 * ((v[5] + 10.0) / 20.0), 1, 366)
                                   : 167;  // 2016-06-15
            const std::string stamp = make_timestamp(hour, doy);

            std::map<std::string, std::string> cell;
            cell["incident_id"] = std::to_string(id);
            cell["offense_id"] = std::to_string(id);
            cell["offense_code"] =
                spec.leaky ? std::to_string(1000 * (static_cast<long>(c) + 1)) : "1299";
            cell["offense_code_extension"] = "0";
            cell["offense_type_id"] =
                spec.leaky ? "synthetic-offense-" + category : "synthetic-offense";
            cell["offense_category_id"] = category;
            cell["first_occurrence_date"] = stamp;
            cell["last_occurrence_date"] = "";
            cell["reported_date"] = stamp;
            cell["incident_address"] = "";
            cell["geo_x"] = d >= 3 ? format_double(v[2]) : "3140000";
            cell["geo_y"] = d >= 4 ? format_double(v[3]) : "1700000";
            cell["geo_lon"] = format_double(v[0]);
            cell["geo_lat"] = d >= 2 ? format_double(v[1]) : "39.7";
            cell["district_id"] =
                d >= 7 ? std::to_string(std::llround(1000.0 * v[6])) : "3";
            cell["precinct_id"] =
                d >= 8 ? std::to_string(std::llround(1000.0 * v[7])) : "111";
            cell["neighborhood_id"] = "blob-town";
            cell["is_crime"] = "1";
            cell["is_traffic"] = "0";

            std::vector<std::string> row;
            row.reserve(incident_attribute_names().size());
            for (const std::string& name : incident_attribute_names()) {
                row.push_back(cell[name]);
            }
            write_csv_row(out, row);
        }
    }
}

void generate_synthetic_csv(const SynthSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    write_synthetic_csv(spec, out);
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace crimelab
