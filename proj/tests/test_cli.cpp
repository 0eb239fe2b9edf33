#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plumb/report.hpp"
#include "test_graphs.hpp"

namespace {

struct TempGraph {
    std::string path;
    explicit TempGraph(const std::string& text) {
        static int counter = 0;
        path = "cli_test_graph_" + std::to_string(counter++) + ".graph";
        std::ofstream out(path);
        out << text;
    }
    ~TempGraph() { std::remove(path.c_str()); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = plumb::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("validate accepts a good graph and rejects a bad one") {
    TempGraph good(testdata::chain2);
    Result r = run({"validate", good.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid") == 0);

    TempGraph bad("vertex 1 1\n");
    Result rb = run({"validate", bad.path});
    CHECK(rb.code == 1);
    CHECK(rb.out.find("not negative definite") != std::string::npos);
}

TEST_CASE("count matches the closed form on one vertex") {
    TempGraph g(testdata::single_m1);
    Result r = run({"count", g.path, "--x", "3", "--class", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "6\n");
}

TEST_CASE("sw reports the example constants") {
    TempGraph g(testdata::example10);
    Result r = run({"sw", g.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("pc=13") != std::string::npos);
    CHECK(r.out.find("h=()") != std::string::npos);
}

TEST_CASE("sw lists every class of the four-leg star") {
    TempGraph g(testdata::star_d4);
    Result r = run({"sw", g.path});
    CHECK(r.code == 0);
    int lines = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("h=", 0) == 0) ++lines;
    CHECK(lines == 4);
}

TEST_CASE("invariants in both formats") {
    TempGraph g(testdata::chain2);
    Result text = run({"invariants", g.path});
    CHECK(text.code == 0);
    CHECK(text.out.find("det: 3") != std::string::npos);

    Result js = run({"invariants", g.path, "--format", "json"});
    CHECK(js.code == 0);
    auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["det"] == "3");
    CHECK(doc["invariant_factors"].size() == 1);
}

TEST_CASE("expand lists box coefficients") {
    TempGraph g(testdata::single_m1);
    Result r = run({"expand", g.path, "--bound", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("t^(0/1)") != std::string::npos);
    CHECK(r.out.find("t^(2/1)") != std::string::npos);
}

TEST_CASE("polypart prints the periodic constant") {
    TempGraph g(testdata::example10);
    Result r = run({"polypart", g.path});
    CHECK(r.code == 0);
    CHECK(r.out.find("pc=13") != std::string::npos);

    Result js = run({"polypart", g.path, "--format", "json"});
    auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["pc"] == "13");
    CHECK(doc["polynomial"].size() == 13);
}

TEST_CASE("structure check exits cleanly") {
    TempGraph g(testdata::chain2);
    Result r = run({"structure-check", g.path, "--mode", "full", "--samples", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mismatch") == std::string::npos);
}

TEST_CASE("surgery check exits cleanly") {
    TempGraph g(testdata::chain2);
    Result r = run({"surgery-check", g.path, "--vertex", "2", "--samples", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mismatch") == std::string::npos);
    CHECK(r.out.find("sw surgery formula") != std::string::npos);
}

TEST_CASE("errors surface with exit code one") {
    Result r = run({"count", "no_such_file.graph", "--x", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);

    TempGraph g(testdata::chain2);
    Result rb = run({"count", g.path, "--x", "1", "--class", "9,9"});
    CHECK(rb.code == 1);

    Result ru = run({"bogus-subcommand"});
    CHECK(ru.code == 1);
}

TEST_CASE("output is byte deterministic") {
    TempGraph g(testdata::star_d4);
    Result a = run({"sw", g.path});
    Result b = run({"sw", g.path});
    CHECK(a.out == b.out);
    Result ja = run({"invariants", g.path, "--format", "json"});
    Result jb = run({"invariants", g.path, "--format", "json"});
    CHECK(ja.out == jb.out);
}
