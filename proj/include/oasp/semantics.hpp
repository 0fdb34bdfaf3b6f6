#pragma once
// Reducts, least models and (open) answer sets.
//
// A ground program is reduced in two stages: first every generalized
// literal is unfolded into the consequent instances whose antecedent holds,
// then the usual reduct keeps rules whose negative parts agree with the
// candidate and strips them. Both stages evaluate ground equalities eagerly,
// so reduced bodies contain only regular atoms.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oasp/ast.hpp"
#include "oasp/ground.hpp"

namespace oasp {

namespace detail {

// Eagerly evaluates positive equality atoms in a body. Returns false when a
// ground equality is violated (the rule is dropped); true equalities vanish.
inline bool simplify_body_equalities(std::vector<Literal>& body) {
  std::vector<Literal> out;
  for (Literal& l : body) {
    if (!l.naf && l.atom.is_equality() && l.atom.ground()) {
      if (l.atom.args[0] == l.atom.args[1]) continue;
      return false;
    }
    out.push_back(std::move(l));
  }
  body = std::move(out);
  return true;
}

}  // namespace detail

// Unfolds generalized literals of a ground program against (U, M): each
// "forall Y (phi => psi)" becomes the positive atoms psi[Y|y] for all y with
// M |= phi[Y|y]. Equality instances are evaluated on the spot.
inline Program geli_reduct(const Program& ground_p, const OpenInterpretation& i) {
  Program out;
  for (const Rule& r : ground_p.rules) {
    Rule nr;
    nr.name = r.name;
    nr.head = r.head;
    nr.body = r.body;
    bool alive = true;
    for (const GeneralizedLiteral& g : r.glits) {
      for_each_assignment(i.universe, g.bound, [&](const Subst& s) {
        if (!alive) return;
        if (!satisfies(i, substitute(s, g.antecedent))) return;
        Atom c = substitute(s, g.consequent);
        if (c.is_equality()) {
          if (!(c.args[0] == c.args[1])) alive = false;
          return;
        }
        nr.body.push_back(pos(std::move(c)));
      });
      if (!alive) break;
    }
    if (!alive) continue;
    if (!detail::simplify_body_equalities(nr.body)) continue;
    normalize(nr);
    out.rules.push_back(std::move(nr));
  }
  std::sort(out.rules.begin(), out.rules.end());
  return out;
}

// The reduct w.r.t. a candidate: keeps a rule when the candidate satisfies
// every naf head literal's atom and no naf body atom; the kept rule is the
// positive head atom (if any) with the positive body. Generalized literals
// are carried along untouched.
inline Program gl_reduct(const Program& ground_p, const OpenInterpretation& i) {
  Program out;
  for (const Rule& r : ground_p.rules) {
    bool keep = true;
    for (const Literal& l : r.head)
      if (l.naf && !i.holds(l.atom)) { keep = false; break; }
    if (keep)
      for (const Literal& l : r.body)
        if (l.naf && i.holds(l.atom)) { keep = false; break; }
    if (!keep) continue;
    Rule nr;
    nr.name = r.name;
    for (const Literal& l : r.head)
      if (!l.naf) nr.head.push_back(l);
    for (const Literal& l : r.body)
      if (!l.naf) nr.body.push_back(l);
    nr.glits = r.glits;
    if (!detail::simplify_body_equalities(nr.body)) continue;
    normalize(nr);
    out.rules.push_back(std::move(nr));
  }
  std::sort(out.rules.begin(), out.rules.end());
  return out;
}

// One application of the immediate-consequence operator of a reduced
// program: adds every head whose body is contained in the current set.
inline std::set<Atom> t_step(const Program& reduced, const std::set<Atom>& base) {
  std::set<Atom> next = base;
  for (const Rule& r : reduced.rules) {
    if (r.head.empty()) continue;
    bool fire = true;
    for (const Literal& l : r.body)
      if (!base.count(l.atom)) { fire = false; break; }
    if (fire) next.insert(r.head[0].atom);
  }
  return next;
}

struct LeastModel {
  std::set<Atom> atoms;
  std::map<Atom, int> depth;  // first iteration stage that derived the atom
};

// Least model of the definite part (rules with a head) of a reduced
// program. Pre: no naf, no generalized literals, no body equalities.
inline LeastModel least_model(const Program& reduced) {
  LeastModel m;
  int stage = 0;
  for (;;) {
    ++stage;
    std::set<Atom> next = t_step(reduced, m.atoms);
    if (next.size() == m.atoms.size()) break;
    for (const Atom& a : next)
      if (!m.atoms.count(a)) m.depth.emplace(a, stage);
    m.atoms = std::move(next);
  }
  return m;
}

struct CheckResult {
  bool ok = false;
  std::string reason;
  std::map<Atom, int> depth;  // derivation stage per atom when ok
};

// I is an answer set of a ground program iff it is the least model of the
// definite part of the fully reduced program and every reduced constraint
// is respected.
inline CheckResult is_answer_set(const Program& ground_p, const OpenInterpretation& i) {
  CheckResult res;
  Program reduced = gl_reduct(geli_reduct(ground_p, i), i);
  Program definite;
  std::vector<Rule> constraints;
  for (Rule& r : reduced.rules) {
    if (r.head.empty())
      constraints.push_back(r);
    else
      definite.rules.push_back(r);
  }
  for (const Rule& c : constraints) {
    bool all_in = true;
    for (const Literal& l : c.body)
      if (!i.holds(l.atom)) { all_in = false; break; }
    if (all_in) {
      res.reason = "constraint " + c.name + " violated";
      return res;
    }
  }
  LeastModel lm = least_model(definite);
  if (lm.atoms != i.atoms) {
    res.reason = "candidate differs from least model of reduct";
    return res;
  }
  res.ok = true;
  res.depth = std::move(lm.depth);
  return res;
}

// Oracle used to validate is_answer_set on small instances: subset-minimal
// model of the reduced program, checked by enumerating all proper subsets.
inline bool is_minimal_model_bruteforce(const Program& reduced,
                                        const OpenInterpretation& i,
                                        std::size_t max_atoms = 12) {
  std::vector<Atom> base(i.atoms.begin(), i.atoms.end());
  if (base.size() > max_atoms)
    throw ModelError("brute-force minimality limited to " +
                     std::to_string(max_atoms) + " atoms");
  auto models = [&](const std::set<Atom>& m) {
    OpenInterpretation j{i.universe, m};
    return satisfies(j, reduced);
  };
  if (!models(i.atoms)) return false;
  const std::size_t n = base.size();
  for (std::size_t mask = 0; mask + 1 < (std::size_t(1) << n); ++mask) {
    std::set<Atom> sub;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t(1) << b)) sub.insert(base[b]);
    if (models(sub)) return false;
  }
  return true;
}

// (U, M) is an open answer set of P iff U covers the constants of P, M holds
// ground regular atoms over U, and M is an answer set of the grounding.
inline CheckResult is_open_answer_set(const Program& p, const OpenInterpretation& i) {
  CheckResult res;
  if (i.universe.size() == 0) {
    res.reason = "empty universe";
    return res;
  }
  for (const std::string& c : constants(p)) {
    if (!i.universe.contains(c)) {
      res.reason = "universe misses constant '" + c + "'";
      return res;
    }
  }
  for (const Atom& a : i.atoms) {
    if (a.is_equality() || !a.ground()) {
      res.reason = "interpretation contains a non-ground or equality atom";
      return res;
    }
    for (const Term& t : a.args) {
      if (!i.universe.contains(t.name)) {
        res.reason = "atom outside universe";
        return res;
      }
    }
  }
  return is_answer_set(ground(p, i.universe), i);
}

struct CommuteReport {
  bool equal = false;
  Program unfold_then_reduce;
  Program reduce_then_unfold;
};

// The two reduction orders agree on ground programs: unfolding generalized
// literals first and reducing after yields the same rules as reducing first
// (carrying the literals) and unfolding second.
inline CommuteReport reduct_commute_check(const Program& p, const OpenInterpretation& i) {
  Program g = ground(p, i.universe);
  CommuteReport rep;
  rep.unfold_then_reduce = gl_reduct(geli_reduct(g, i), i);
  rep.reduce_then_unfold = geli_reduct(gl_reduct(g, i), i);
  rep.equal = rep.unfold_then_reduce == rep.reduce_then_unfold;
  return rep;
}

}  // namespace oasp
