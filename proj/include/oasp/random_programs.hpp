#pragma once
// Seeded random instance generators used by the property and self-test
// suites. All draws go through a caller-owned mt19937 so suites replay
// deterministically.

#include <random>
#include <string>
#include <vector>

#include "oasp/ast.hpp"

namespace oasp {

struct GenOptions {
  int max_rules = 3;
  int num_preds = 2;      // drawn from q, r, s, f
  int max_arity = 2;
  int max_body = 2;
  int num_vars = 2;       // drawn from X, Y, Z
  int num_constants = 1;  // drawn from a, b, c
  bool allow_glits = false;
  bool allow_free = true;
  bool allow_naf = true;
  bool allow_equality = true;
  bool allow_constraints = true;
};

namespace genpool {
inline const std::vector<std::string> preds = {"q", "r", "s", "f"};
inline const std::vector<std::string> vars = {"X", "Y", "Z"};
inline const std::vector<std::string> consts = {"a", "b", "c"};
}  // namespace genpool

namespace detail {

inline int draw(std::mt19937& rng, int lo, int hi) {  // inclusive
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool coin(std::mt19937& rng, double p = 0.5) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline Term random_term(std::mt19937& rng, const GenOptions& o) {
  if (o.num_constants > 0 && coin(rng, 0.35))
    return cst(genpool::consts[draw(rng, 0, o.num_constants - 1)]);
  return var(genpool::vars[draw(rng, 0, o.num_vars - 1)]);
}

inline Atom random_atom(std::mt19937& rng, const GenOptions& o) {
  int pi = draw(rng, 0, o.num_preds - 1);
  // arity fixed per predicate index so signatures stay consistent
  int arity = 1 + (pi % o.max_arity);
  Atom a{genpool::preds[pi], {}};
  for (int i = 0; i < arity; ++i) a.args.push_back(random_term(rng, o));
  return a;
}

inline Literal random_body_literal(std::mt19937& rng, const GenOptions& o) {
  if (o.allow_equality && coin(rng, 0.2)) {
    Atom e = eq_atom(random_term(rng, o), random_term(rng, o));
    return {e, coin(rng, 0.6)};  // mostly inequalities
  }
  Literal l = pos(random_atom(rng, o));
  if (o.allow_naf && coin(rng, 0.35)) l.naf = true;
  return l;
}

inline BoolPtr random_bool(std::mt19937& rng, const GenOptions& o, int depth) {
  if (depth <= 0 || coin(rng, 0.45)) {
    if (o.allow_equality && coin(rng, 0.2)) {
      BoolPtr e = batom(eq_atom(random_term(rng, o), random_term(rng, o)));
      return coin(rng, 0.5) ? bnot(e) : e;
    }
    return batom(random_atom(rng, o));
  }
  switch (draw(rng, 0, 2)) {
    case 0:
      return bnot(random_bool(rng, o, depth - 1));
    case 1:
      return band({random_bool(rng, o, depth - 1), random_bool(rng, o, depth - 1)});
    default:
      return bor({random_bool(rng, o, depth - 1), random_bool(rng, o, depth - 1)});
  }
}

inline GeneralizedLiteral random_glit(std::mt19937& rng, const GenOptions& o) {
  GeneralizedLiteral g;
  int nb = draw(rng, 1, std::min(2, o.num_vars));
  for (int i = 0; i < nb; ++i) g.bound.push_back(genpool::vars[i]);
  g.antecedent = random_bool(rng, o, 1);
  g.consequent = random_atom(rng, o);
  return g;
}

}  // namespace detail

// Random program over a small shared signature. May contain free rules,
// constraints, naf, equalities and (optionally) generalized literals.
inline Program random_program(std::mt19937& rng, const GenOptions& o = {}) {
  using namespace detail;
  Program p;
  int nrules = draw(rng, 1, o.max_rules);
  for (int i = 0; i < nrules; ++i) {
    Rule r;
    double kind = std::uniform_real_distribution<double>(0, 1)(rng);
    if (o.allow_free && kind < 0.2) {
      Atom a = random_atom(rng, o);
      r.head.push_back(pos(a));
      r.head.push_back(naf(a));
      p.rules.push_back(std::move(r));
      continue;
    }
    if (!(o.allow_constraints && kind < 0.3)) {
      r.head.push_back(pos(random_atom(rng, o)));
      if (o.allow_naf && coin(rng, 0.15))
        r.head.push_back(naf(random_atom(rng, o)));
    }
    int nbody = draw(rng, r.head.empty() ? 1 : 0, o.max_body);
    for (int b = 0; b < nbody; ++b) r.body.push_back(random_body_literal(rng, o));
    if (o.allow_glits && coin(rng, 0.5)) r.glits.push_back(random_glit(rng, o));
    p.rules.push_back(std::move(r));
  }
  assign_rule_names(p);
  normalize(p);
  return p;
}

// Random program whose only predicate is a single collapsed one ("p") of the
// given arity, as produced by the predicate-collapsing translation.
struct PProgramOptions {
  int arity = 2;
  int max_rules = 3;
  int num_vars = 2;
  int num_constants = 1;
  bool allow_glits = false;
  bool allow_free = true;
  bool allow_naf = true;
  bool allow_equality = true;
};

inline Program random_p_program(std::mt19937& rng, const PProgramOptions& o) {
  using namespace detail;
  GenOptions base;
  base.num_vars = o.num_vars;
  base.num_constants = o.num_constants;
  auto p_atom = [&]() {
    Atom a{"p", {}};
    for (int i = 0; i < o.arity; ++i) a.args.push_back(random_term(rng, base));
    return a;
  };
  auto p_bool = [&](int depth) {
    BoolPtr leaf = coin(rng, 0.2)
                       ? batom(eq_atom(random_term(rng, base), random_term(rng, base)))
                       : batom(p_atom());
    if (depth <= 0 || coin(rng, 0.4)) return coin(rng, 0.3) ? bnot(leaf) : leaf;
    BoolPtr l = coin(rng, 0.3) ? bnot(batom(p_atom())) : batom(p_atom());
    return coin(rng, 0.5) ? band({l, leaf}) : bor({l, leaf});
  };
  Program p;
  int nrules = draw(rng, 1, o.max_rules);
  for (int i = 0; i < nrules; ++i) {
    Rule r;
    double kind = std::uniform_real_distribution<double>(0, 1)(rng);
    if (o.allow_free && kind < 0.25) {
      Atom a = p_atom();
      r.head.push_back(pos(a));
      r.head.push_back(naf(a));
      p.rules.push_back(std::move(r));
      continue;
    }
    if (kind < 0.35) {
      // constraint
    } else {
      r.head.push_back(pos(p_atom()));
    }
    int nbody = draw(rng, r.head.empty() ? 1 : 0, 2);
    for (int b = 0; b < nbody; ++b) {
      if (o.allow_equality && coin(rng, 0.25)) {
        r.body.push_back({eq_atom(random_term(rng, base), random_term(rng, base)),
                          coin(rng, 0.6)});
      } else {
        Literal l = pos(p_atom());
        if (o.allow_naf && coin(rng, 0.4)) l.naf = true;
        r.body.push_back(l);
      }
    }
    if (o.allow_glits && coin(rng, 0.6)) {
      GeneralizedLiteral g;
      int nb = draw(rng, 1, std::min(2, o.num_vars));
      for (int bi = 0; bi < nb; ++bi) g.bound.push_back(genpool::vars[bi]);
      g.antecedent = p_bool(1);
      g.consequent = p_atom();
      r.glits.push_back(std::move(g));
    }
    p.rules.push_back(std::move(r));
  }
  assign_rule_names(p);
  normalize(p);
  return p;
}

// Random fully guarded program over the collapsed predicate: every non-free
// rule gets a body guard atom containing all its variables, the head
// carries a matching naf guard, and generalized literals are guarded.
inline Program random_fully_guarded_p_program(std::mt19937& rng, const PProgramOptions& o,
                                              bool with_glits) {
  using namespace detail;
  if (o.num_constants < 1)
    throw ModelError("guarded generator pads guard atoms with constants");
  // atom containing exactly the given variables, padded with constants
  auto p_over = [&](const std::vector<std::string>& vs) {
    Atom a{"p", {}};
    for (int i = 0; i < o.arity; ++i) {
      if (i < static_cast<int>(vs.size()))
        a.args.push_back(var(vs[i]));
      else
        a.args.push_back(cst(genpool::consts[draw(rng, 0, o.num_constants - 1)]));
    }
    return a;
  };
  Program p;
  int nrules = draw(rng, 1, o.max_rules);
  for (int i = 0; i < nrules; ++i) {
    Rule r;
    if (coin(rng, 0.25)) {
      Atom a = p_over({genpool::vars[0]});
      r.head.push_back(pos(a));
      r.head.push_back(naf(a));
      p.rules.push_back(std::move(r));
      continue;
    }
    int nv = draw(rng, 0, std::min(o.num_vars, o.arity));
    std::vector<std::string> vs(genpool::vars.begin(), genpool::vars.begin() + nv);
    Atom guard = p_over(vs);
    r.body.push_back(pos(guard));
    if (coin(rng, 0.8)) r.head.push_back(pos(p_over(vs)));
    r.head.push_back(naf(guard));  // head guard
    int extra = draw(rng, 0, 2);
    for (int b = 0; b < extra; ++b) {
      Literal l = pos(p_over(vs));
      if (coin(rng, 0.4)) l.naf = true;
      r.body.push_back(l);
    }
    if (with_glits && coin(rng, 0.6)) {
      GeneralizedLiteral g;
      g.bound = {"V"};
      std::vector<std::string> gvars = {"V"};
      for (const std::string& v : vs)
        if (static_cast<int>(gvars.size()) < o.arity) gvars.push_back(v);
      Atom gguard = p_over(gvars);
      BoolPtr phi = batom(gguard);
      if (coin(rng, 0.5)) {
        BoolPtr side = batom(p_over(gvars));
        if (coin(rng, 0.5)) side = bnot(side);
        phi = band({phi, side});
      }
      g.antecedent = phi;
      g.consequent = p_over(gvars);
      r.glits.push_back(std::move(g));
    }
    p.rules.push_back(std::move(r));
  }
  assign_rule_names(p);
  normalize(p);
  return p;
}

}  // namespace oasp
