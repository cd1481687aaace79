#include <doctest.h>

#include <filesystem>

#include "dampchain/io.hpp"
#include "fixtures.hpp"

using namespace dampchain;

namespace {

const std::string data_dir = DAMPCHAIN_DATA_DIR;

IngestOptions with(InputFormat f, DanglingPolicy d = DanglingPolicy::Reject) {
    IngestOptions o;
    o.format = f;
    o.dangling = d;
    return o;
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("dampchain_test_" + name)).string();
}

}  // namespace

TEST_CASE("numbers and fractions") {
    CHECK(parse_number("0.25") == 0.25);
    CHECK(parse_number("1/3") == doctest::Approx(1.0 / 3).epsilon(1e-16));
    CHECK(parse_number(" 2/4 ") == 0.5);
    CHECK(parse_number("-1e-3") == -1e-3);
    CHECK_THROWS_AS(parse_number("abc"), Error);
    CHECK_THROWS_AS(parse_number("1/0"), Error);
    CHECK_THROWS_AS(parse_number("1/"), Error);
    CHECK_THROWS_AS(parse_number(""), Error);
}

TEST_CASE("format and policy names") {
    CHECK(parse_format("csv") == InputFormat::Csv);
    CHECK(parse_format("edges") == InputFormat::EdgeList);
    CHECK_THROWS(parse_format("xml"));
    CHECK(format_from_path("a/b.json") == InputFormat::Json);
    CHECK(format_from_path("x.CSV") == InputFormat::Csv);
    CHECK(format_from_path("graph.txt") == InputFormat::EdgeList);
    for (auto p : {DanglingPolicy::Reject, DanglingPolicy::SelfLoop, DanglingPolicy::UniformJump})
        CHECK(parse_dangling_policy(to_string(p)) == p);
    CHECK_THROWS(parse_dangling_policy("drop"));
}

TEST_CASE("edge lists reproduce the worked chains") {
    const auto five = ingest(data_dir + "/fig1.edges", with(InputFormat::EdgeList));
    CHECK((five.p0.values() - fixtures::p_complete5().values()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_FALSE(five.damping.has_value());
    const auto two = ingest(data_dir + "/fig3.edges", with(InputFormat::EdgeList));
    CHECK((two.p0.values() - fixtures::p_two_class().values()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("edge list details") {
    // Duplicates collapse; comments and blank lines are ignored.
    const auto a = parse_edge_list("1 2 # first\n1 2\n\n2 1\n1 1\n", with(InputFormat::EdgeList));
    CHECK(a.p0(0, 0) == 0.5);
    CHECK(a.p0(0, 1) == 0.5);
    CHECK(a.p0(1, 0) == 1.0);
    CHECK_THROWS_AS(parse_edge_list("0 1\n", with(InputFormat::EdgeList)), Error);
    CHECK_THROWS_AS(parse_edge_list("1\n", with(InputFormat::EdgeList)), Error);
    CHECK_THROWS_AS(parse_edge_list("1 x\n", with(InputFormat::EdgeList)), Error);
    CHECK_THROWS_AS(parse_edge_list("# nothing\n", with(InputFormat::EdgeList)), Error);
}

TEST_CASE("dangling policies") {
    const std::string text = "1 2\n2 1\n2 3\n";
    CHECK_THROWS_AS(parse_edge_list(text, with(InputFormat::EdgeList)), Error);
    const auto loop = parse_edge_list(text, with(InputFormat::EdgeList, DanglingPolicy::SelfLoop));
    CHECK(loop.p0(2, 2) == 1.0);
    const auto jump = parse_edge_list(text, with(InputFormat::EdgeList, DanglingPolicy::UniformJump));
    for (std::size_t j = 0; j < 3; ++j) CHECK(jump.p0(2, j) == doctest::Approx(1.0 / 3));
}

TEST_CASE("csv with fractions") {
    const auto four = ingest(data_dir + "/ex2.csv", with(InputFormat::Csv));
    CHECK((four.p0.values() - fixtures::p_four().values()).cwiseAbs().maxCoeff() < 1e-15);
    const auto ws = parse_matrix_csv("0.5 0.5\n1, 0\n", with(InputFormat::Csv));
    CHECK(ws.p0(1, 0) == 1.0);
    CHECK_THROWS_AS(parse_matrix_csv("0.5,0.5\n1\n", with(InputFormat::Csv)), Error);
    CHECK_THROWS_AS(parse_matrix_csv("0.5,0.6\n0.5,0.5\n", with(InputFormat::Csv)), Error);
}

TEST_CASE("json matrix with optional damping") {
    const auto j = parse_matrix_json(R"({"matrix": [[0.5, 0.5], [0.25, 0.75]], "damping": [0.4, 0.6]})",
                                     with(InputFormat::Json));
    CHECK(j.p0(1, 1) == 0.75);
    REQUIRE(j.damping.has_value());
    CHECK((*j.damping)[1] == 0.6);
    CHECK_THROWS_AS(parse_matrix_json(R"({"matrix": [[1]], "damping": [0]})", with(InputFormat::Json)), Error);
    CHECK_THROWS_AS(parse_matrix_json(R"({"rows": []})", with(InputFormat::Json)), Error);
    CHECK_THROWS_AS(parse_matrix_json("{not json", with(InputFormat::Json)), Error);
    CHECK_THROWS_AS(parse_matrix_json(R"({"matrix": [[1, 0]], "damping": [1]})", with(InputFormat::Json)), Error);
}

TEST_CASE("emit and re-ingest is stable") {
    const auto p = fixtures::p_complete5();
    const auto d = DampingVector::uniform(5);
    const std::string js = emit_matrix_json(p, &d);
    const auto back = parse_matrix_json(js, with(InputFormat::Json));
    CHECK(back.p0.values() == p.values());
    CHECK(back.damping->values() == d.values());
    CHECK(emit_matrix_json(back.p0, &*back.damping) == js);

    const std::string csv = emit_matrix_csv(p);
    const auto again = parse_matrix_csv(csv, with(InputFormat::Csv));
    CHECK(again.p0.values() == p.values());
    CHECK(emit_matrix_csv(again.p0) == csv);
}

TEST_CASE("files") {
    const std::string path = tmp_path("vec.txt");
    write_file(path, "0.2, 0.3\n0.5\n");
    const auto v = read_vector_file(path);
    REQUIRE(v.size() == 3);
    CHECK(v(2) == 0.5);
    write_file(path, "[0.1, 0.9]");
    CHECK(read_vector_file(path).size() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_file(tmp_path("missing_file")), Error);
    try {
        read_file(tmp_path("missing_file"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}
