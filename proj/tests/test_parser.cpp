#include <catch2/catch_amalgamated.hpp>

#include "groupeq/commands.hpp"
#include "groupeq/parser.hpp"

using namespace groupeq;

namespace {

std::string displayed_doc(long long k) {
  return "group G = finite { table = [[0,1,2,3,4],[1,2,3,4,0],[2,3,4,0,1],"
         "[3,4,0,1,2],[4,0,1,2,3]], labels = [e, a, b, c, d] }\n"
         "vars x, y, z, t;\n"
         "eq: a x b y c y z^5 d z^-2 = 1;\n"
         "eq: [x t, d z]^2022 d x^4 c y^5 b z^6 = 1;\n"
         "eq: a x^7 y^8 d z^" +
         std::to_string(k) + " = 1;\n";
}

}  // namespace

TEST_CASE("parsing the displayed three-equation document") {
  Document doc = parse(displayed_doc(9));
  REQUIRE(doc.equations.size() == 3);
  EquationSystem sys(doc.spec, doc.equations);
  ExponentMatrix em = exponent_matrix(sys);
  CHECK(em.matrix ==
        IntMatrix::from_rows({{1, 2, 3, 0}, {4, 5, 6, 0}, {7, 8, 9, 0}}));
  CHECK_FALSE(is_nonsingular(sys));
  Document doc10 = parse(displayed_doc(10));
  CHECK(is_nonsingular(EquationSystem(doc10.spec, doc10.equations)));
}

TEST_CASE("word grammar") {
  Document doc = parse("vars x, y;\neq: x x^-1 = 1;\n");
  REQUIRE(doc.equations.size() == 1);
  CHECK(doc.equations[0].is_identity());

  doc = parse("vars x, y;\neq: [x, y] = 1;\n");
  CHECK(doc.equations[0].str() == "x^-1 y^-1 x y");

  doc = parse("vars x, y;\neq: (x y)^3 = 1;\n");
  CHECK(doc.equations[0].str() == "x y x y x y");

  doc = parse("vars x;\neq: 1 = 1;\n");
  CHECK(doc.equations[0].is_identity());

  doc = parse("group G = finite { table = [[0,1],[1,0]] }\nvars x;\n"
              "eq: G.1 x = 1;\n");
  CHECK(doc.equations[0].str() == "G.1 x");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("vars x;\neq: [x, = 1;\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col > 0);
  }

  CHECK_THROWS_AS(parse("vars x;\neq: zork = 1;\n"), ParseError);
  CHECK_THROWS_AS(parse("vars x, x;\n"), ParseError);
  CHECK_THROWS_AS(parse("group G = free { a }\ngroup G = free { b }\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("group P = presented < p | p^2 >\nvars x;\n"
                        "eq: p x = 1;\n"),
                  ParseError);
}

TEST_CASE("declarations") {
  Document doc = parse(
      "group P = perms { (1 2 3), (1 2) }\n"
      "group F = free { u, v }\n"
      "group Q = presented < s, t | s^2, t^3, [s, t] >\n"
      "vars x;\n"
      "assert F locally_indicable\n"
      "subset A of P = { 0 }\n"
      "subgroup H of Q = { s }\n");
  CHECK(doc.groups.size() == 3);
  CHECK(doc.finite_group_of("P")->order() == 6);
  CHECK(doc.assertions.get("F").locally_indicable);
  REQUIRE(doc.subsets.size() == 1);
  CHECK(doc.subsets[0].elements == std::vector<int>{0});
  REQUIRE(doc.subgroups.size() == 1);
  CHECK(doc.presentation_of("Q")->relators.size() == 3);
  // Free groups present with no relators.
  CHECK(doc.presentation_of("F")->relators.empty());
}

TEST_CASE("print/parse round trip") {
  const char* docs[] = {
      "group G = finite { table = [[0,1],[1,0]], labels = [e,a] }\n"
      "vars x;\neq: x^2 a = 1;\n",
      "group C = free { c }\ngroup D = free { d }\n"
      "assert C locally_indicable\nassert D locally_indicable\n"
      "eq: c d c d = 1;\n",
      "group P = perms { (1 2 3), (1 2) }\nvars x, y;\n"
      "subset A of P = { 0, 1, 2 }\neq: P.3 x [x, y]^2 = 1;\n",
      "group Q = presented < s, t | s^2, (s t)^3 >\n"
      "subgroup H of Q = { s t^-1 }\n",
      "group G = finite { table = [[0,1],[1,0]] }\n"
      "group H = finite { table = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]] }\n"
      "embed f : G -> H = [0, 2]\nvars x;\neq: x G.1 = 1;\n",
  };
  for (const char* text : docs) {
    Document first = parse(text);
    std::string printed = print(first);
    Document second = parse(printed);
    CHECK(first == second);
    CHECK(print(second) == printed);
  }
}

TEST_CASE("analyze command report") {
  Document doc = parse(displayed_doc(9));
  RunFlags flags;
  flags.max_index = 2;  // the 2022-power content makes deep searches costly
  flags.node_budget = 200000;
  Report rep = run("analyze", doc, flags);
  CHECK(rep.data["schema"] == 1);
  CHECK(rep.data["command"] == "analyze");
  CHECK(rep.data["nonsingular"] == false);
  REQUIRE(rep.data["equations"].size() == 3);
  CHECK(rep.data["equations"][0]["exponent_row"] ==
        Json::array({"1", "2", "3", "0"}));
  // Finite coefficients: both checkers run; the GR one reports failure.
  bool saw_gr = false;
  for (const Json& t : rep.data["theorems"]) {
    if (t["theorem"] == "gerstenhaber_rothaus") {
      saw_gr = true;
      CHECK(t["conclusion"].is_null());
    }
  }
  CHECK(saw_gr);
  CHECK(rep.text.find("nonsingular: no") != std::string::npos);
  // Variable-bearing equations with nontrivial content are not exotic.
  CHECK(rep.data["equations"][0]["exotic"] == false);

  Document exotic = parse(
      "group G = finite { table = [[0,1],[1,0]], labels = [e,a] }\n"
      "vars x;\neq: a x x^-1 = 1;\n");
  Report erep = run("analyze", exotic, flags);
  CHECK(erep.data["equations"][0]["exotic"] == true);
  CHECK(erep.data["equations"][0]["conjugacy"]["kind"] == "factor");
}

TEST_CASE("homology command report") {
  Document doc = parse("group Q = presented < x | x^2 >\n");
  RunFlags flags;
  flags.index_table = 1;  // the index-2 cover (the sphere)
  Report rep = run("homology", doc, flags);
  CHECK(rep.data["homology"]["b2"] == 1);
  CHECK(rep.data["homology"]["h1"] == "0");
  CHECK(rep.data["criterion"]["agree"] == true);
  CHECK(rep.data["criterion"]["h2_trivial"] == false);

  flags.index_table = 0;
  rep = run("homology", doc, flags);
  CHECK(rep.data["homology"]["b2"] == 0);
  CHECK(rep.data["homology"]["h1"] == "Z/2");
  CHECK(rep.data["criterion"]["h2_trivial"] == true);

  flags.index_table = 99;
  CHECK_THROWS_AS(run("homology", doc, flags), Error);
}

TEST_CASE("subgroups command report") {
  Document doc = parse("group Q = presented < x, y | x^2, y^3, (x y)^3 >\n"
                       "subgroup H of Q = { x }\n");
  RunFlags flags;
  flags.max_index = 6;
  Report rep = run("subgroups", doc, flags);
  CHECK(rep.data["complete"] == true);
  CHECK(!rep.data["subgroups"].empty());
  // Index-1 subgroup comes first.
  CHECK(rep.data["subgroups"][0]["index"] == 1);
  REQUIRE(rep.data["enumerated"].size() == 1);
  CHECK(rep.data["enumerated"][0]["index"] == 6);  // |A4 : <x>| = 6
}

TEST_CASE("solve command report") {
  Document doc = parse(
      "group C2 = finite { table = [[0,1],[1,0]], labels = [e,a] }\n"
      "vars x;\neq: x^2 a = 1;\n");
  RunFlags flags;
  Report rep = run("solve", doc, flags);
  REQUIRE(!rep.data["solution"].is_null());
  CHECK(rep.data["solution"]["member"] == "wreath(C2,C2)");
  CHECK(rep.data["solution"]["verified"] == true);
}

TEST_CASE("solve command uses the constants' factor and user embeddings") {
  Document doc = parse(
      "group C2 = finite { table = [[0,1],[1,0]], labels = [e, a] }\n"
      "group C4 = finite { table = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]] }\n"
      "embed sqrt2 : C2 -> C4 = [0, 2]\n"
      "vars x;\n"
      "eq: x^2 a = 1;\n");
  RunFlags flags;
  flags.order_cap = 4;  // keeps the wreath members out of reach
  Report rep = run("solve", doc, flags);
  REQUIRE(!rep.data["solution"].is_null());
  CHECK(rep.data["solution"]["member"] == "sqrt2(C2->C4)");
}

TEST_CASE("rewrite command report") {
  Document doc = parse(
      "group G = finite { table = [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]], "
      "labels = [e,a,b,ab] }\n"
      "vars x;\n"
      "subset A of G = { e, a }\n"
      "eq: x a x b x = 1;\n");
  RunFlags flags;
  flags.normal = "A";
  Report rep = run("rewrite", doc, flags);
  CHECK(rep.data["applicable"] == true);
  CHECK(rep.data["changed_variables"] == true);
  CHECK(rep.data["system"]["exponent_matrix"] ==
        Json::array({Json::array({"1", "2"}), Json::array({"2", "1"})}));
  CHECK(rep.data["system"]["nonsingular"] == true);

  // A quotient equation with no solution is a reported outcome.
  Document doc2 = parse(
      "group G = finite { table = [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]], "
      "labels = [e,g,g2,g3] }\n"
      "vars x;\n"
      "subset A of G = { e, g2 }\n"
      "eq: x^2 g = 1;\n");
  Report rep2 = run("rewrite", doc2, flags);
  CHECK(rep2.data["applicable"] == false);
}

TEST_CASE("json reports have the documented shape") {
  Document doc = parse(displayed_doc(3));
  RunFlags flags;
  flags.max_index = 1;
  flags.node_budget = 100000;
  for (const char* cmd : {"analyze"}) {
    Report rep = run(cmd, doc, flags);
    CHECK(rep.data.contains("schema"));
    CHECK(rep.data["schema"] == 1);
    CHECK(rep.data.contains("command"));
    for (const Json& t : rep.data["theorems"]) {
      CHECK(t.contains("theorem"));
      if (t.contains("checks")) {
        for (const Json& c : t["checks"]) {
          CHECK(c.contains("name"));
          CHECK((c["status"] == "verified" || c["status"] == "asserted" ||
                 c["status"] == "failed"));
        }
      }
    }
  }
}
