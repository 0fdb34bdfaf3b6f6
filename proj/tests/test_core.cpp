#include <catch2/catch_amalgamated.hpp>

#include "oasp/ast.hpp"
#include "oasp/ground.hpp"
#include "oasp/parse.hpp"

using namespace oasp;

TEST_CASE("term ordering puts constants before variables") {
  CHECK(cst("a") < var("A"));
  CHECK(cst("a") < cst("b"));
  CHECK(var("X") < var("Y"));
  CHECK(cst("#0") < cst("a"));
}

TEST_CASE("rule projections split head and body by sign") {
  Program p = parse_program("g: q(X) v not f(X) :- r(X), not s(X), X != a.");
  const Rule& r = p.rules[0];
  auto hp = head_pos(r);
  auto hn = head_neg(r);
  auto bp = body_pos(r);
  auto bn = body_neg(r);
  REQUIRE(hp.size() == 1);
  CHECK(hp[0].pred == "q");
  REQUIRE(hn.size() == 1);
  CHECK(hn[0].pred == "f");
  REQUIRE(bp.size() == 1);
  CHECK(bp[0].pred == "r");
  REQUIRE(bn.size() == 2);  // s(X) and the inequality's equality atom
  CHECK(bn[0].is_equality());
  CHECK(bn[1].pred == "s");
}

TEST_CASE("free rule recognition") {
  Program p = parse_program("s(X) v not s(X). q(a). p(X) v not q(X).");
  CHECK(is_free_rule(p.rules[0]));
  CHECK_FALSE(is_free_rule(p.rules[1]));
  CHECK_FALSE(is_free_rule(p.rules[2]));
}

TEST_CASE("rule variables include free variables of generalized literals") {
  Program p = parse_program("q(X) :- forall Y (r(Y) & f(X,Y) => s(X)).");
  auto vs = rule_vars(p.rules[0]);
  CHECK(vs == std::set<std::string>{"X"});
  Program shadow = parse_program("a(X) :- forall X (~q(X) => b(X)), not c(X).");
  CHECK(rule_vars(shadow.rules[0]) == std::set<std::string>{"X"});
}

TEST_CASE("satisfaction of literals, formulas and ground rules") {
  OpenInterpretation i;
  i.universe = Universe::of({"x", "y"});
  i.atoms = {atom("q", {cst("x")}), atom("b", {cst("x")}), atom("b", {cst("y")}),
             atom("c", {cst("x")}), atom("a", {cst("y")})};

  CHECK(satisfies(i, pos(eq_atom(cst("x"), cst("x")))));
  CHECK(satisfies(i, naf(eq_atom(cst("x"), cst("y")))));
  CHECK(satisfies(i, pos(atom("q", {cst("x")}))));
  CHECK(satisfies(i, naf(atom("q", {cst("y")}))));

  // forall X (~q(X) => b(X)) holds: only X=y has a true antecedent
  GeneralizedLiteral g;
  g.bound = {"X"};
  g.antecedent = bnot(batom(atom("q", {var("X")})));
  g.consequent = atom("b", {var("X")});
  CHECK(satisfies(i, g));

  GeneralizedLiteral bad = g;
  bad.consequent = atom("c", {var("X")});  // c(y) missing
  CHECK_FALSE(satisfies(i, bad));

  Program pr = parse_program("a(y) :- b(y), not c(y).");
  CHECK(satisfies(i, pr.rules[0]));
}

TEST_CASE("structural invariants are reported") {
  Program two_pos;
  Rule r;
  r.head = {pos(atom("p", {cst("a")})), pos(atom("q", {cst("a")}))};
  two_pos.rules.push_back(r);
  assign_rule_names(two_pos);
  CHECK_FALSE(validate(two_pos).empty());

  Program eq_head;
  Rule r2;
  r2.head = {pos(eq_atom(cst("a"), cst("b")))};
  eq_head.rules.push_back(r2);
  assign_rule_names(eq_head);
  CHECK_FALSE(validate(eq_head).empty());

  Program arity;
  Rule r3, r4;
  r3.head = {pos(atom("p", {cst("a")}))};
  r4.head = {pos(atom("p", {cst("a"), cst("b")}))};
  arity.rules = {r3, r4};
  assign_rule_names(arity);
  CHECK_FALSE(validate(arity).empty());
}

TEST_CASE("inequality set separates a variable from predicates and filler") {
  Program p = parse_program(
      "q(X) :- forall Y (r(Y) => s(X)).\n"
      "r(a).\n"
      "s(X) v not s(X).\n");
  auto in = in_set("X", p);
  std::vector<Literal> expect = {
      naf(eq_atom(var("X"), cst("#0"))), naf(eq_atom(var("X"), cst("q"))),
      naf(eq_atom(var("X"), cst("r"))), naf(eq_atom(var("X"), cst("s")))};
  std::sort(expect.begin(), expect.end());
  CHECK(in == expect);
}

TEST_CASE("grounding instantiates free variables only") {
  Program p = parse_program("a(X) :- forall X (~q(X) => b(X)), not c(X).");
  Universe u = Universe::of({"x", "y"});
  Program g = ground(p, u);
  REQUIRE(g.rules.size() == 2);
  for (const Rule& r : g.rules) {
    CHECK(rule_vars(r).empty());
    REQUIRE(r.glits.size() == 1);
    CHECK(r.glits[0].bound == std::vector<std::string>{"X"});
  }
}

TEST_CASE("herbrand base covers the signature") {
  Program p = parse_program("q(X) :- f(X,Y).");
  auto hb = herbrand_base(p, Universe::of({"x", "y"}));
  CHECK(hb.size() == 2 + 4);
}
