#include "doctest.h"

#include "curvgraph/errors.hpp"
#include "curvgraph/graph_io.hpp"

using namespace curvgraph;

TEST_CASE("graph loading and canonical order") {
  const auto g = io::load_graph_json(R"({
    "vertices":[{"id":10,"m":2.0},{"id":2,"m":1.0},{"id":7,"m":1.5}],
    "edges":[{"u":10,"v":2,"w":0.5},{"u":7,"v":10,"w":1.25}]})");
  REQUIRE(g.order() == 3);
  // numeric ids sort numerically: 2, 7, 10
  CHECK(g.label(0) == "2");
  CHECK(g.label(1) == "7");
  CHECK(g.label(2) == "10");
  CHECK(g.vertex_weight(g.index_of("10")) == 2.0);
  CHECK(g.edge_weight(g.index_of("10"), g.index_of("2")) == 0.5);

  // string ids sort lexicographically
  const auto s = io::load_graph_json(R"({
    "vertices":[{"id":"b","m":1.0},{"id":"a","m":1.0}],
    "edges":[{"u":"a","v":"b","w":1.0}]})");
  CHECK(s.label(0) == "a");

  // round trip
  const auto again = io::load_graph_json(io::graph_to_json(g));
  CHECK(again.order() == g.order());
  CHECK(again.edge_count() == g.edge_count());
  CHECK(again.edge_weight(0, 2) == g.edge_weight(0, 2));
}

TEST_CASE("loader rejects malformed and invalid input") {
  // malformed JSON carries a position
  try {
    (void)io::load_graph_json("{\"vertices\": [\n  {\"id\": 1, }\n]}", "bad.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("bad.json") != std::string::npos);
    CHECK(what.find("line") != std::string::npos);
  }

  const char* self_loop = R"({"vertices":[{"id":1,"m":1}],"edges":[{"u":1,"v":1,"w":1}]})";
  CHECK_THROWS_WITH_AS((void)io::load_graph_json(self_loop), doctest::Contains("self-loop"),
                       ParseError);

  const char* dup = R"({"vertices":[{"id":1,"m":1},{"id":2,"m":1}],
                        "edges":[{"u":1,"v":2,"w":1},{"u":2,"v":1,"w":2}]})";
  CHECK_THROWS_WITH_AS((void)io::load_graph_json(dup), doctest::Contains("duplicate edge"),
                       ParseError);

  const char* nonpos = R"({"vertices":[{"id":1,"m":1},{"id":2,"m":1}],
                           "edges":[{"u":1,"v":2,"w":0.0}]})";
  CHECK_THROWS_WITH_AS((void)io::load_graph_json(nonpos), doctest::Contains("positive"),
                       ParseError);

  const char* bad_m = R"({"vertices":[{"id":1,"m":-1}],"edges":[]})";
  CHECK_THROWS_AS((void)io::load_graph_json(bad_m), ParseError);

  const char* unknown = R"({"vertices":[{"id":1,"m":1}],"edges":[{"u":1,"v":9,"w":1}]})";
  CHECK_THROWS_WITH_AS((void)io::load_graph_json(unknown), doctest::Contains("unknown vertex"),
                       ParseError);
}

TEST_CASE("vertex sets and functions") {
  const auto g = io::load_graph_json(R"({
    "vertices":[{"id":0,"m":1},{"id":1,"m":1},{"id":2,"m":1}],
    "edges":[{"u":0,"v":1,"w":1},{"u":1,"v":2,"w":1}]})");

  const auto set = io::load_vertex_set(R"({"vertices":[2,0]})", g);
  CHECK(set == std::vector<Vertex>{0, 2});
  CHECK_THROWS_AS((void)io::load_vertex_set(R"({"vertices":[5]})", g), ParseError);

  const auto f = io::load_vertex_function(
      R"({"values":[{"id":0,"value":1.5},{"id":2,"value":-2.0}]})", g);
  CHECK(f.at(0) == 1.5);
  CHECK(f.at(2) == -2.0);
  CHECK(!f.defined(1));
}
