#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "crimelab/table.hpp"
#include "helpers.hpp"

using namespace crimelab;

namespace {

FeatureTable small_table() {
    FeatureTable t;
    t.column_names = {"a", "b", "c"};
    t.column_kinds = {ColumnKind::numeric, ColumnKind::categorical, ColumnKind::numeric};
    t.matrix = Matrix(4, 3);
    double v = 0.5;
    for (double& x : t.matrix.data) x = v += 0.25;
    t.labels = {0, 1, 1, 0};
    t.class_names = {"alpha", "beta"};
    t.code_maps["b"] = {{"x", 0}, {"y", 1}};
    return t;
}

}  // namespace

TEST_CASE("binary round-trip preserves everything, bytes stable") {
    testutil::TempDir dir("table");
    FeatureTable t = small_table();
    t.matrix.at(0, 0) = 0.1 + 0.2;  // not exactly representable in decimal
    save_table(t, dir.file("t.bin"));
    FeatureTable back = load_table(dir.file("t.bin"));
    CHECK(back.column_names == t.column_names);
    CHECK(back.column_kinds == t.column_kinds);
    CHECK(back.matrix == t.matrix);
    CHECK(back.labels == t.labels);
    CHECK(back.class_names == t.class_names);
    CHECK(back.code_maps == t.code_maps);

    save_table(back, dir.file("t2.bin"));
    CHECK(testutil::slurp(dir.file("t.bin")) == testutil::slurp(dir.file("t2.bin")));
}

TEST_CASE("corrupt magic is rejected") {
    testutil::TempDir dir("table");
    testutil::spit(dir.file("bad.bin"), "NOPE....");
    CHECK_THROWS_AS(load_table(dir.file("bad.bin")), DataError);
    CHECK_THROWS_AS(load_table(dir.file("absent.bin")), DataError);
}

TEST_CASE("select_rows and drop_columns") {
    FeatureTable t = small_table();
    FeatureTable sel = t.select_rows({3, 1});
    CHECK(sel.n_rows() == 2);
    CHECK(sel.labels == std::vector<int>{0, 1});
    CHECK(sel.matrix.at(0, 0) == t.matrix.at(3, 0));
    CHECK(sel.class_names == t.class_names);

    FeatureTable dropped = t.drop_columns({"b"});
    CHECK(dropped.n_features() == 2);
    CHECK(dropped.column_names == std::vector<std::string>{"a", "c"});
    CHECK(dropped.code_maps.count("b") == 0);
    CHECK(dropped.matrix.at(2, 1) == t.matrix.at(2, 2));
    CHECK_THROWS_AS(t.drop_columns({"zz"}), DataError);
}

TEST_CASE("validate catches inconsistencies") {
    FeatureTable t = small_table();
    t.validate();
    FeatureTable bad_label = t;
    bad_label.labels[2] = 9;
    CHECK_THROWS_AS(bad_label.validate(), DataError);
    FeatureTable bad_val = t;
    bad_val.matrix.at(1, 1) = std::nan("");
    CHECK_THROWS_AS(bad_val.validate(), DataError);
    FeatureTable bad_shape = t;
    bad_shape.column_names.pop_back();
    CHECK_THROWS_AS(bad_shape.validate(), DataError);
}

TEST_CASE("csv export with sidecar metadata") {
    testutil::TempDir dir("table");
    FeatureTable t = small_table();
    export_table_csv(t, dir.file("t.csv"), "{\"note\":\"hello\"}");
    std::string csv = testutil::slurp(dir.file("t.csv"));
    CHECK(csv.find("a,b,c,offense_category_id") == 0);
    CHECK(csv.find("beta") != std::string::npos);
    nlohmann::json side = nlohmann::json::parse(testutil::slurp(dir.file("t.csv.json")));
    CHECK(side["rows"] == 4);
    CHECK(side["class_names"][1] == "beta");
    CHECK(side["note"] == "hello");
    CHECK(side["code_maps"]["b"]["y"] == 1);
}
