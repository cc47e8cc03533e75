#include <doctest.h>

#include <map>
#include <string>

#include "crimelab/csv.hpp"
#include "crimelab/ingest.hpp"
#include "helpers.hpp"

using namespace crimelab;

namespace {

std::string make_row(std::map<std::string, std::string> over = {}) {
    std::map<std::string, std::string> v = {
        {"incident_id", "2016123"},
        {"offense_id", "201612300"},
        {"offense_code", "5441"},
        {"offense_code_extension", "0"},
        {"offense_type_id", "traf-other"},
        {"offense_category_id", "traffic-accident"},
        {"first_occurrence_date", "2016-06-15 10:00:00"},
        {"last_occurrence_date", ""},
        {"reported_date", "2016-06-15 16:30:00"},
        {"incident_address", "123 Main St"},
        {"geo_x", "3140000"},
        {"geo_y", "1690000"},
        {"geo_lon", "-104.80"},
        {"geo_lat", "39.76"},
        {"district_id", "6"},
        {"precinct_id", "621"},
        {"neighborhood_id", "five-points"},
        {"is_crime", "0"},
        {"is_traffic", "1"}};
    for (auto& [k, val] : over) v[k] = val;
    std::string line;
    for (const std::string& name : incident_attribute_names()) {
        if (!line.empty()) line += ",";
        line += csv_escape(v.at(name));
    }
    return line + "\n";
}

std::string header_line() {
    std::string line;
    for (const std::string& name : incident_attribute_names()) {
        if (!line.empty()) line += ",";
        line += name;
    }
    return line + "\n";
}

}  // namespace

TEST_CASE("timestamp parsing accepts both snapshot formats") {
    DateParts p;
    REQUIRE(parse_timestamp("2016-06-15 16:30:00", p));
    CHECK(p.year == 2016);
    CHECK(p.month == 6);
    CHECK(p.day == 15);
    CHECK(p.hour == 16);
    REQUIRE(parse_timestamp("2016-06-15T08:05", p));
    CHECK(p.hour == 8);
    REQUIRE(parse_timestamp("6/15/2016 4:30:00 PM", p));
    CHECK(p.month == 6);
    CHECK(p.hour == 16);
    REQUIRE(parse_timestamp("6/15/2016 12:05 AM", p));
    CHECK(p.hour == 0);
    REQUIRE(parse_timestamp("6/15/2016 12:59 PM", p));
    CHECK(p.hour == 12);
    REQUIRE(parse_timestamp("2016-06-15 16:30:00.5900000", p));
    CHECK(p.hour == 16);

    CHECK_FALSE(parse_timestamp("2016-13-01 10:00", p));
    CHECK_FALSE(parse_timestamp("2016-02-30 10:00", p));
    CHECK_FALSE(parse_timestamp("junk", p));
    CHECK_FALSE(parse_timestamp("2016-06-15 24:00", p));
    CHECK_FALSE(parse_timestamp("6/15/2016 13:00 PM", p));
}

TEST_CASE("attribute name lists") {
    CHECK(incident_attribute_names().size() == 19);
    CHECK(incident_attribute_names().front() == "incident_id");
    const auto& cats = denver_category_names();
    CHECK(cats.size() == 15);
    for (size_t i = 1; i < cats.size(); ++i) CHECK(cats[i - 1] < cats[i]);
}

TEST_CASE("header validation") {
    IngestReport report;
    {
        std::istringstream in("a,b\n1,2\n");
        CsvTable csv = read_csv(in);
        CHECK_THROWS_AS(parse_incident_records(csv, report), SchemaError);
    }
    {
        std::istringstream in(header_line().substr(0, header_line().size() - 1) +
                              ",incident_id\n");
        CsvTable csv = read_csv(in);
        CHECK_THROWS_AS(parse_incident_records(csv, report), SchemaError);
    }
    {
        // extra unknown columns and case differences are tolerated
        std::string text = "EXTRA," + header_line();
        text.replace(text.find("incident_id"), 11, "Incident_ID");
        std::istringstream in(text + "x," + make_row());
        CsvTable csv = read_csv(in);
        IngestReport r2;
        RecordSet rs = parse_incident_records(csv, r2);
        CHECK(rs.rows.size() == 1);
        CHECK(r2.malformed_rows == 0);
    }
}

TEST_CASE("per-row invariants mark rows malformed with a reason") {
    std::string text = header_line();
    text += make_row();
    text += make_row({{"reported_date", "not a date"}});
    text += make_row({{"offense_code", "54.5"}});
    text += make_row({{"geo_lon", "east"}});
    text += make_row({{"is_crime", "2"}});
    text += make_row({{"geo_lat", ""}});  // lon still present -> pair violation
    std::istringstream in(text);
    CsvTable csv = read_csv(in);
    IngestReport report;
    RecordSet rs = parse_incident_records(csv, report);
    CHECK(rs.rows.size() == 1);
    CHECK(report.input_rows == 6);
    CHECK(report.malformed_rows == 5);
    CHECK(report.malformed_reasons.at("reported_date") == 1);
    CHECK(report.malformed_reasons.at("offense_code") == 1);
    CHECK(report.malformed_reasons.at("geo_lon") == 1);
    CHECK(report.malformed_reasons.at("is_crime") == 1);
    CHECK(report.malformed_reasons.at("geo_pair") == 1);
}

TEST_CASE("cleaning: drop versus sentinel, label missing always drops") {
    auto build = [&] {
        std::string text = header_line();
        text += make_row();
        text += make_row({{"neighborhood_id", ""}});
        text += make_row({{"offense_category_id", ""}});
        return text;
    };
    {
        testutil::TempDir dir("ingest");
        testutil::spit(dir.file("d.csv"), build());
        CleaningPolicy policy;  // drop
        IngestReport report;
        FeatureTable t = ingest_csv(dir.file("d.csv"), policy, report);
        CHECK(t.n_rows() == 1);
        CHECK(report.dropped_missing_rows == 1);
        CHECK(report.dropped_label_rows == 1);
        CHECK(report.emitted_rows == 1);
        CHECK(report.input_rows == report.malformed_rows + report.dropped_missing_rows +
                                       report.dropped_label_rows + report.emitted_rows);
        CHECK(report.missing_by_column.at("neighborhood_id") == 1);
    }
    {
        testutil::TempDir dir("ingest");
        testutil::spit(dir.file("d.csv"), build());
        CleaningPolicy policy;
        policy.missing_row_action = CleaningPolicy::MissingRowAction::sentinel;
        policy.sentinel_value = -9999.0;
        IngestReport report;
        FeatureTable t = ingest_csv(dir.file("d.csv"), policy, report);
        CHECK(t.n_rows() == 2);  // sentinel keeps the row; missing label still drops
        CHECK(report.sentinel_filled_rows == 1);
        CHECK(report.dropped_label_rows == 1);
        int nb = t.column_index("neighborhood_id");
        REQUIRE(nb >= 0);
        CHECK(t.matrix.at(1, static_cast<size_t>(nb)) == -9999.0);
        CHECK(report.input_rows == report.malformed_rows + report.dropped_missing_rows +
                                       report.dropped_label_rows + report.emitted_rows);
    }
}

TEST_CASE("missing address and last occurrence never cost a row") {
    testutil::TempDir dir("ingest");
    std::string text = header_line();
    text += make_row({{"incident_address", ""}, {"last_occurrence_date", ""}});
    testutil::spit(dir.file("d.csv"), text);
    CleaningPolicy policy;  // drop
    IngestReport report;
    FeatureTable t = ingest_csv(dir.file("d.csv"), policy, report);
    CHECK(t.n_rows() == 1);
    CHECK(report.dropped_missing_rows == 0);
}

TEST_CASE("encoding: decomposed date, lexicographic codes, label split") {
    testutil::TempDir dir("ingest");
    std::string text = header_line();
    text += make_row({{"offense_type_id", "theft-items"},
                      {"offense_category_id", "larceny"},
                      {"neighborhood_id", "baker"},
                      {"reported_date", "2017-01-02 03:44"}});
    text += make_row({{"offense_type_id", "assault-simple"},
                      {"offense_category_id", "other-crimes-against-persons"},
                      {"neighborhood_id", "cbd"}});
    testutil::spit(dir.file("d.csv"), text);
    CleaningPolicy policy;
    IngestReport report;
    FeatureTable t = ingest_csv(dir.file("d.csv"), policy, report);

    REQUIRE(t.n_rows() == 2);
    CHECK(t.n_features() == 15);
    const std::vector<std::string> expect_cols = {
        "offense_code", "offense_type_id", "year", "month", "day", "hour",
        "geo_x", "geo_y", "geo_lon", "geo_lat", "district_id", "precinct_id",
        "neighborhood_id", "is_crime", "is_traffic"};
    CHECK(t.column_names == expect_cols);

    CHECK(t.matrix.at(0, 2) == 2017.0);
    CHECK(t.matrix.at(0, 3) == 1.0);
    CHECK(t.matrix.at(0, 4) == 2.0);
    CHECK(t.matrix.at(0, 5) == 3.0);

    // lexicographic token codes: assault-simple < theft-items, baker < cbd
    int type_col = t.column_index("offense_type_id");
    int nb_col = t.column_index("neighborhood_id");
    CHECK(t.matrix.at(0, static_cast<size_t>(type_col)) == 1.0);
    CHECK(t.matrix.at(1, static_cast<size_t>(type_col)) == 0.0);
    CHECK(t.matrix.at(0, static_cast<size_t>(nb_col)) == 0.0);
    CHECK(t.matrix.at(1, static_cast<size_t>(nb_col)) == 1.0);
    CHECK(t.code_maps.at("offense_type_id").at("assault-simple") == 0);

    // labels in lexicographic class order
    REQUIRE(t.class_names.size() == 2);
    CHECK(t.class_names[0] == "larceny");
    CHECK(t.class_names[1] == "other-crimes-against-persons");
    CHECK(t.labels == std::vector<int>{0, 1});
    CHECK(t.n_classes() == 2);
    t.validate();
}

TEST_CASE("more than 15 label tokens is a schema error") {
    testutil::TempDir dir("ingest");
    std::string text = header_line();
    for (int i = 0; i < 16; ++i) {
        text += make_row({{"offense_category_id", "cat-" + std::to_string(i)}});
    }
    testutil::spit(dir.file("d.csv"), text);
    CleaningPolicy policy;
    IngestReport report;
    CHECK_THROWS_AS(ingest_csv(dir.file("d.csv"), policy, report), SchemaError);
}
