#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "oasp/parse.hpp"
#include "oasp/random_programs.hpp"
#include "oasp/semantics.hpp"
#include "oasp/solver.hpp"
#include "oasp/transform.hpp"

using namespace oasp;

namespace {

Program parse(const std::string& src) { return parse_program(src); }

std::vector<std::set<Atom>> atom_sets(const std::vector<AnswerSet>& v) {
  std::vector<std::set<Atom>> out;
  for (const AnswerSet& as : v) out.push_back(as.atoms);
  return out;
}

Universe with_fresh(const Program& p, int extra) {
  auto cs = constants(p);
  std::vector<std::string> elems(cs.begin(), cs.end());
  for (const std::string& f : fresh_elements(p, extra)) elems.push_back(f);
  return Universe::of(elems);
}

bool pred_satisfiable(const Program& p, const Universe& u, const std::string& pred,
                      const SolveBudget& budget = {}) {
  bool found = false;
  enumerate_open_answer_sets(p, u, budget, [&](const AnswerSet& as) {
    for (const Atom& a : as.atoms)
      if (a.pred == pred) {
        found = true;
        return false;
      }
    return true;
  });
  return found;
}

}  // namespace

TEST_CASE("packing: worked four-rule program", "[transform]") {
  Program p = parse(
      "r1: h(a,b) :- q(X).\n"
      "r2: q(X) v not q(X).\n"
      "r3: :- q(a).\n"
      "r4: :- q(b).\n");
  PProgram pp = to_p_program(p);

  CHECK(pp.mapping.p_pred == "#p");
  CHECK(pp.mapping.p_arity == 3);
  REQUIRE(pp.mapping.original.size() == 2);
  CHECK(pp.mapping.original.at("h") == 2);
  CHECK(pp.mapping.original.at("q") == 1);

  CHECK(render_program(pp.program) ==
        "r1: #p(a,b,h) :- #p(X,#0,q), X != #0, X != h, X != q.\n"
        "r2: #p(X,#0,q) v not #p(X,#0,q).\n"
        "r3: :- #p(a,#0,q).\n"
        "r4: :- #p(b,#0,q).\n");
  CHECK(parse(render_program(pp.program)) == pp.program);

  SECTION("atom mapping inverts on honest atoms and drops wrong ones") {
    Atom qa = atom("q", {cst("x")});
    Atom packed = to_p_atom(qa, pp.mapping);
    CHECK(render(packed) == "#p(x,#0,q)");
    REQUIRE(from_p_atom(packed, pp.mapping).has_value());
    CHECK(*from_p_atom(packed, pp.mapping) == qa);
    CHECK(!from_p_atom(atom("#p", {cst("q"), cst("#0"), cst("q")}), pp.mapping)
               .has_value());
    CHECK(!from_p_atom(atom("#p", {cst("x"), cst("h"), cst("q")}), pp.mapping)
               .has_value());
    CHECK(!from_p_atom(atom("#p", {cst("x"), cst("#0"), cst("t")}), pp.mapping)
               .has_value());
  }

  SECTION("open answer sets transfer across the packing") {
    Universe u = with_fresh(p, 1);  // {a, b, u1}
    Universe up = p_universe(u, pp.mapping);
    CHECK(up.contains("#0"));
    CHECK(up.contains("h"));
    auto orig = atom_sets(enumerate_open_answer_sets(p, u));
    std::set<std::set<Atom>> projected;
    for (const AnswerSet& as : enumerate_open_answer_sets(pp.program, up))
      projected.insert(project_p_atoms(as.atoms, pp.mapping));
    std::set<std::set<Atom>> expect(orig.begin(), orig.end());
    CHECK(projected == expect);
  }
}

TEST_CASE("packing: generalized literal program", "[transform]") {
  Program p = parse(
      "r1: q(X) :- forall Y (r(Y) => s(X)).\n"
      "r2: r(a).\n"
      "r3: s(X) v not s(X).\n");
  PProgram pp = to_p_program(p);

  CHECK(pp.mapping.p_arity == 2);
  CHECK(render_program(pp.program) ==
        "r1: #p(X,q) :- X != #0, X != q, X != r, X != s, "
        "forall Y (#p(Y,r) & Y != #0 & Y != q & Y != r & Y != s => #p(X,s)).\n"
        "r2: #p(a,r).\n"
        "r3: #p(X,s) v not #p(X,s).\n");
  CHECK(parse(render_program(pp.program)) == pp.program);

  SECTION("the displayed witness is an open answer set of the packed program") {
    Universe u = Universe::of({"a", "x", "q", "r", "s", "#0"});
    std::set<Atom> m{atom("#p", {cst("x"), cst("s")}),
                     atom("#p", {cst("a"), cst("r")}),
                     atom("#p", {cst("x"), cst("q")})};
    CHECK(is_open_answer_set(pp.program, {u, m}).ok);
    CHECK(project_p_atoms(m, pp.mapping) ==
          std::set<Atom>{atom("s", {cst("x")}), atom("r", {cst("a")}),
                         atom("q", {cst("x")})});
  }

  SECTION("q is satisfiable on both sides") {
    Universe u = Universe::of({"a", "x"});
    CHECK(pred_satisfiable(p, u, "q"));
    bool packed_sat = false;
    enumerate_open_answer_sets(pp.program, p_universe(u, pp.mapping), {},
                               [&](const AnswerSet& as) {
                                 for (const Atom& a : as.atoms) {
                                   auto orig = from_p_atom(a, pp.mapping);
                                   if (orig && orig->pred == "q") {
                                     packed_sat = true;
                                     return false;
                                   }
                                 }
                                 return true;
                               });
    CHECK(packed_sat);
  }
}

TEST_CASE("packing: arity is one above the widest predicate", "[transform]") {
  PProgram pp = to_p_program(parse("r1: q(X) :- not r(X).\n"));
  CHECK(pp.mapping.p_arity == 2);
  CHECK(render_program(pp.program) ==
        "r1: #p(X,q) :- not #p(X,r), X != #0, X != q, X != r.\n");
}

TEST_CASE("packing: reserved filler constant is rejected in inputs", "[transform]") {
  Program p = parse("r1: q(#0).\n");
  CHECK_THROWS_AS(to_p_program(p), ModelError);
}

TEST_CASE("packing: satisfiability verdicts agree on random programs",
          "[transform][property]") {
  std::mt19937 rng(420011);
  GenOptions opt;
  opt.allow_glits = true;
  SolveBudget tight;
  tight.max_free_guesses = 1u << 10;
  int checked = 0, draws = 0, skipped = 0;
  while (checked < 50 && draws < 600) {
    ++draws;
    Program p = random_program(rng, opt);
    auto sig = program_signature(p);
    if (sig.empty()) continue;
    const std::string query = sig.begin()->first;
    PProgram pp = to_p_program(p);
    bool ok = true;
    for (int extra = 0; extra <= 1 && ok; ++extra) {
      Universe u = with_fresh(p, extra);
      if (u.size() == 0) continue;
      try {
        bool lhs = pred_satisfiable(p, u, query, tight);
        bool rhs = false;
        enumerate_open_answer_sets(
            pp.program, p_universe(u, pp.mapping), tight,
            [&](const AnswerSet& as) {
              for (const Atom& a : as.atoms) {
                auto orig = from_p_atom(a, pp.mapping);
                if (orig && orig->pred == query) {
                  rhs = true;
                  return false;
                }
              }
              return true;
            });
        INFO(render_program(p) << "query " << query << ", extra " << extra);
        REQUIRE(lhs == rhs);
      } catch (const ResourceError&) {
        ++skipped;
        ok = false;
      }
    }
    if (ok) ++checked;
  }
  INFO("skipped by budget: " << skipped);
  CHECK(checked >= 50);
}

TEST_CASE("head-body guarding: shape", "[transform]") {
  CHECK(render_program(hbg(parse("r1: p(X) :- p(X).\n"))) ==
        "r1: p(X) v not p(X) :- p(X).\n");
  CHECK(render_program(hbg(parse("r1: :- q(a).\n"))) == "r1: not q(a) :- q(a).\n");
  CHECK(render_program(hbg(parse("r1: s(X) v not s(X).\n"))) ==
        "r1: s(X) v not s(X).\n");
  CHECK(render_program(hbg(parse(
            "r1: q(X) :- f(X,Y), not s(Y), forall Z (r(Z) => s(Z)).\n"))) ==
        "r1: q(X) v not f(X,Y) :- f(X,Y), not s(Y), forall Z (r(Z) => s(Z)).\n");
}

TEST_CASE("head-body guarding: open answer sets preserved",
          "[transform][property]") {
  std::mt19937 rng(420022);
  GenOptions opt;
  opt.allow_glits = true;
  for (int i = 0; i < 60; ++i) {
    Program p = random_program(rng, opt);
    Program h = hbg(p);
    CHECK(parse(render_program(h)) == h);
    for (int extra = 1; extra <= 2; ++extra) {
      Universe u = with_fresh(p, extra);
      INFO(render_program(p) << "universe size " << u.size());
      CHECK(atom_sets(enumerate_open_answer_sets(p, u)) ==
            atom_sets(enumerate_open_answer_sets(h, u)));
    }
  }
}

TEST_CASE("guard atoms: shape", "[transform]") {
  Program p = parse(
      "r1: q(X) :- f(X,Y).\n"
      "r2: f(a,Y) v not f(a,Y).\n");
  Program g = gua(p);
  CHECK(render_program(g) ==
        "r1: q(X) :- #g(X,X), #g(X,Y), #g(Y,Y), f(X,Y).\n"
        "r2: f(a,Y) v not f(a,Y) :- #g(Y,Y).\n"
        "r3: #g(a,a).\n");

  auto sets = atom_sets(enumerate_open_answer_sets(g, Universe::of({"a"})));
  REQUIRE(sets.size() == 2);
  CHECK(sets[0] == std::set<Atom>{atom("#g", {cst("a"), cst("a")})});
  CHECK(sets[1] == std::set<Atom>{atom("#g", {cst("a"), cst("a")}),
                                  atom("f", {cst("a"), cst("a")}),
                                  atom("q", {cst("a")})});
}

TEST_CASE("guard atoms: ground rules only gain facts", "[transform]") {
  CHECK(render_program(gua(parse("r1: q(a) :- f(a).\n"))) ==
        "r1: q(a) :- f(a).\n"
        "r2: #g(a,a).\n");
}

TEST_CASE("guard atoms: quadratically many facts", "[transform]") {
  Program p = parse("r1: q(a) :- r(b), s(c).\n");
  Program g = gua(p);
  int facts = 0;
  for (const Rule& r : g.rules)
    if (!head_pos(r).empty() && head_pos(r)[0].pred == "#g") ++facts;
  CHECK(facts == 9);
}

TEST_CASE("guard atoms: need a constant", "[transform]") {
  CHECK_THROWS_AS(gua(parse("r1: q(X) :- r(X).\n")), ModelError);
}

TEST_CASE("guard atoms: classical answer sets survive", "[transform][property]") {
  std::mt19937 rng(420033);
  GenOptions opt;
  opt.num_constants = 2;
  int checked = 0, draws = 0;
  while (checked < 60 && draws < 600) {
    ++draws;
    Program p = random_program(rng, opt);
    if (constants(p).empty()) continue;
    Program g = gua(p);
    CHECK(parse(render_program(g)) == g);

    std::set<std::set<Atom>> classical;
    for (const AnswerSet& as : classical_answer_sets(p)) classical.insert(as.atoms);

    auto cs = constants(p);
    Universe cts_u = Universe::of({cs.begin(), cs.end()});
    std::set<Atom> guard_facts;
    for (const std::string& a : cs)
      for (const std::string& b : cs)
        guard_facts.insert(atom("#g", {cst(a), cst(b)}));

    std::set<std::set<Atom>> via_guard;
    for (const AnswerSet& as : enumerate_open_answer_sets(g, cts_u)) {
      for (const Atom& fa : guard_facts) {
        INFO(render_program(p));
        CHECK(as.atoms.count(fa) == 1);
      }
      via_guard.insert(strip_guard_atoms(as.atoms, "#g"));
    }
    INFO(render_program(p));
    REQUIRE(classical == via_guard);
    ++checked;
  }
  CHECK(checked >= 60);
}

TEST_CASE("free choice: rules for extensional predicates", "[transform]") {
  Program p = parse(
      "r1: q(X) :- b(X), not r(X).\n"
      "r2: r(X) :- c(X,X).\n");
  CHECK(render_program(free_choice(p)) ==
        "r1: q(X) :- b(X), not r(X).\n"
        "r2: r(X) :- c(X,X).\n"
        "r3: b(X1) v not b(X1).\n"
        "r4: c(X1,X2) v not c(X1,X2).\n");
  CHECK(render_program(free_choice(parse("r1: q(a).\n"))) == "r1: q(a).\n");
}

TEST_CASE("double negation: shape and identity", "[transform]") {
  Program p = parse("r1: q(X) :- f(X), forall Y (r(X,Y) => s(Y)).\n");
  CHECK(render_program(double_negation(p)) ==
        "r1: q(X) :- f(X), not #d1(X).\n"
        "r2: #d1(X) :- r(X,Y), not s(Y).\n");

  Program plain = parse("r1: q(X) :- f(X), not s(X).\n");
  CHECK(double_negation(plain) == plain);
}

TEST_CASE("double negation: rejects recursion and compound antecedents",
          "[transform]") {
  CHECK_THROWS_AS(
      double_negation(parse("r1: q(X) :- q(X), forall Y (r(Y) => s(Y)).\n")),
      ModelError);
  CHECK_THROWS_AS(
      double_negation(parse(
          "r1: q(X) :- forall Y (r(Y) & f(Y) => s(Y)).\n")),
      ModelError);
  CHECK(recursion_free(parse("r1: q(X) :- r(X).\nr2: r(X) :- s(X).\n")));
  CHECK(!recursion_free(parse("r1: q(X) :- r(X).\nr2: r(X) :- not q(X).\n")));
}

TEST_CASE("double negation: satisfiability preserved", "[transform][property]") {
  std::mt19937 rng(420044);
  GenOptions opt;
  opt.allow_glits = true;
  opt.allow_free = false;
  opt.allow_constraints = false;
  int checked = 0, draws = 0;
  while (checked < 40 && draws < 4000) {
    ++draws;
    Program p = random_program(rng, opt);
    bool has_glit = false, simple = true;
    for (const Rule& r : p.rules)
      for (const GeneralizedLiteral& g : r.glits) {
        has_glit = true;
        if (g.antecedent->kind != BoolFormula::Kind::Atom) simple = false;
      }
    if (!has_glit || !simple || !recursion_free(p)) continue;
    auto sig = program_signature(p);
    if (sig.empty()) continue;
    const std::string query = sig.begin()->first;
    Program d = double_negation(p);
    SatResult a = satisfiable_up_to(p, query, 1);
    SatResult b = satisfiable_up_to(d, query, 1);
    INFO(render_program(p) << "query " << query);
    REQUIRE(a.status == b.status);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("size accounting tracks the advertised growth", "[transform][property]") {
  std::mt19937 rng(420055);
  GenOptions opt;
  opt.allow_glits = true;
  opt.num_constants = 2;
  for (int i = 0; i < 100; ++i) {
    Program p = random_program(rng, opt);
    const std::size_t s = program_size(p);
    CHECK(program_size(hbg(p)) <= 2 * s);
    if (!program_signature(p).empty())
      CHECK(program_size(to_p_program(p).program) <= 10 * s * s + 10 * s + 10);
    if (!constants(p).empty())
      CHECK(program_size(gua(p)) <= 8 * s * s + 8 * s + 8);
  }
}
