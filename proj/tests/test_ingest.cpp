#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "eqmine/errors.hpp"
#include "eqmine/relation.hpp"
#include "eqmine/rng.hpp"

using namespace eqmine;

TEST_CASE("header row with a non-numeric data cell") {
    auto rel = parse_relation("a,b\n1,2\n3,x\n", "t");
    REQUIRE(rel.column_count() == 2);
    CHECK(rel.columns[0].name == "a");
    CHECK(rel.columns[1].name == "b");
    REQUIRE(rel.row_count == 2);
    CHECK(rel.columns[0].values == std::vector<double>{1.0, 3.0});
    CHECK(rel.columns[1].values[0] == 2.0);
    CHECK(is_missing(rel.columns[1].values[1]));
}

TEST_CASE("headerless file gets generated column names") {
    auto rel = parse_relation("1,2\n3,4\n", "t");
    CHECK(rel.columns[0].name == "col0");
    CHECK(rel.columns[1].name == "col1");
    CHECK(rel.columns[0].values == std::vector<double>{1.0, 3.0});
    CHECK(rel.columns[1].values == std::vector<double>{2.0, 4.0});
}

TEST_CASE("ragged rows are rejected") {
    CHECK_THROWS_AS(parse_relation("1,2,3\n4,5\n", "t"), RaggedRows);
}

TEST_CASE("all-missing content is rejected") {
    CHECK_THROWS_AS(parse_relation("a,b\nx,y\n", "t"), NoNumericColumns);
    CHECK_THROWS_AS(parse_relation("", "t"), NoNumericColumns);
    CHECK_THROWS_AS(parse_relation("a,b\n", "t"), NoNumericColumns);
}

TEST_CASE("non-finite literals become missing") {
    auto rel = parse_relation("a,b\nnan,1\ninf,-inf\n2,1e3\n", "t");
    CHECK(is_missing(rel.columns[0].values[0]));
    CHECK(is_missing(rel.columns[0].values[1]));
    CHECK(is_missing(rel.columns[1].values[1]));
    CHECK(rel.columns[0].values[2] == 2.0);
    CHECK(rel.columns[1].values[2] == 1000.0);
}

TEST_CASE("forced header modes and delimiters") {
    LoadOptions tab{'\t', HeaderMode::Absent};
    auto rel = parse_relation("1\t2\n3\t4\n", "t", tab);
    CHECK(rel.columns[0].name == "col0");
    CHECK(rel.row_count == 2);

    LoadOptions forced{',', HeaderMode::Present};
    auto rel2 = parse_relation("1,2\n3,4\n", "t", forced);
    CHECK(rel2.columns[0].name == "1");  // numeric header forced
    CHECK(rel2.row_count == 1);
}

TEST_CASE("quoted fields and scientific notation") {
    auto rel = parse_relation("\"the,name\",b\n1.5e-3,\"2\"\n", "t");
    CHECK(rel.columns[0].name == "the,name");
    CHECK(rel.columns[0].values[0] == doctest::Approx(0.0015));
    CHECK(rel.columns[1].values[0] == 2.0);
}

TEST_CASE("duplicate header names are made unique") {
    auto rel = parse_relation("a,a,a\n1,2,3\n", "t");
    CHECK(rel.columns[0].name == "a");
    CHECK(rel.columns[1].name == "a_2");
    CHECK(rel.columns[2].name == "a_3");
}

TEST_CASE("format/parse round-trip preserves values and missing mask") {
    Rng rng(101);
    Relation rel;
    rel.name = "t";
    rel.row_count = 64;
    rel.columns.resize(3);
    for (std::size_t j = 0; j < 3; ++j) {
        rel.columns[j].name = "c" + std::to_string(j);
        for (std::size_t i = 0; i < rel.row_count; ++i) {
            if (rng.uniform01() < 0.1)
                rel.columns[j].values.push_back(std::nan(""));
            else
                rel.columns[j].values.push_back(rng.normal() * 1e3);
        }
    }
    auto back = parse_relation(format_relation(rel), "t");
    REQUIRE(back.row_count == rel.row_count);
    REQUIRE(back.column_count() == rel.column_count());
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(back.columns[j].name == rel.columns[j].name);
        for (std::size_t i = 0; i < rel.row_count; ++i) {
            double a = rel.columns[j].values[i];
            double b = back.columns[j].values[i];
            if (is_missing(a)) CHECK(is_missing(b));
            else CHECK(a == b);  // bit-exact via shortest round-trip formatting
        }
    }
}

namespace {

Relation two_column_relation() {
    Relation rel;
    rel.name = "t";
    rel.row_count = 3;
    rel.columns = {{"a", {1.0, std::nan(""), 4.0}}, {"b", {2.0, 3.0, 5.0}}};
    return rel;
}

}  // namespace

TEST_CASE("candidate_view drops incomplete rows per side") {
    auto left = two_column_relation();
    Relation right;
    right.name = "r";
    right.row_count = 2;
    right.columns = {{"x", {7.0, 8.0}}, {"y", {9.0, 10.0}}};

    auto view = candidate_view(left, right, canonicalize({{0, 0}, {1, 1}}), 0, 1);
    REQUIRE(view.left.rows == 2);  // middle row has a missing 'a'
    CHECK(view.left.at(0, 0) == 1.0);
    CHECK(view.left.at(0, 1) == 2.0);
    CHECK(view.left.at(1, 0) == 4.0);
    CHECK(view.left.at(1, 1) == 5.0);
    CHECK(view.right.rows == 2);
}

TEST_CASE("candidate_view only filters on referenced columns") {
    auto left = two_column_relation();
    auto view = candidate_view(left, left, canonicalize({{1, 1}}), 0, 1);
    CHECK(view.left.rows == 3);  // column b is complete
}

TEST_CASE("candidate_view subsampling is exact and deterministic") {
    Relation rel;
    rel.name = "t";
    rel.row_count = 10000;
    rel.columns.resize(1);
    rel.columns[0].name = "a";
    Rng rng(5);
    for (std::size_t i = 0; i < rel.row_count; ++i)
        rel.columns[0].values.push_back(rng.normal());

    auto p = canonicalize({{0, 0}});
    auto v1 = candidate_view(rel, rel, p, 2000, 42);
    auto v2 = candidate_view(rel, rel, p, 2000, 42);
    CHECK(v1.left.rows == 2000);
    CHECK(v1.right.rows == 2000);
    CHECK(v1.left == v2.left);
    CHECK(v1.right == v2.right);

    auto v3 = candidate_view(rel, rel, p, 2000, 43);
    CHECK(v3.left != v1.left);  // different seed, different subsample
}

TEST_CASE("candidate_view reports empty survivors") {
    Relation rel;
    rel.name = "t";
    rel.row_count = 2;
    rel.columns = {{"a", {std::nan(""), std::nan("")}}, {"b", {1.0, 2.0}}};
    CHECK_THROWS_AS(candidate_view(rel, rel, canonicalize({{0, 1}}), 0, 1), EmptyAfterFiltering);
}

TEST_CASE("complete-case row sets shrink as candidates grow") {
    Rng rng(77);
    Relation rel;
    rel.name = "t";
    rel.row_count = 300;
    rel.columns.resize(4);
    for (std::size_t j = 0; j < 4; ++j) {
        rel.columns[j].name = "c" + std::to_string(j);
        for (std::size_t i = 0; i < rel.row_count; ++i)
            rel.columns[j].values.push_back(rng.uniform01() < 0.15 ? std::nan("")
                                                                   : rng.normal());
    }
    auto wide = canonicalize({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    auto narrow = canonicalize({{0, 0}, {1, 1}});
    auto vw = candidate_view(rel, rel, wide, 0, 1);
    auto vn = candidate_view(rel, rel, narrow, 0, 1);
    CHECK(vn.left.rows >= vw.left.rows);
    CHECK(vn.right.rows >= vw.right.rows);
}

TEST_CASE("load_relation surfaces IO errors") {
    CHECK_THROWS_AS(load_relation("/nonexistent/path/file.csv"), IoError);
}

TEST_CASE("write_relation then load_relation round-trips through a file") {
    Relation rel;
    rel.name = "disk";
    rel.row_count = 4;
    rel.columns = {{"m", {1.25, -3.5, std::nan(""), 0.0078125}},
                   {"n", {2.0, std::nan(""), 6.0, -7.0}}};
    auto path = std::filesystem::temp_directory_path() / "eqmine_roundtrip.csv";
    write_relation(rel, path);
    auto back = load_relation(path);
    REQUIRE(back.row_count == 4);
    CHECK(back.columns[0].values[0] == 1.25);
    CHECK(is_missing(back.columns[0].values[2]));
    CHECK(is_missing(back.columns[1].values[1]));
    CHECK(back.columns[1].values[3] == -7.0);
    std::filesystem::remove(path);
}
