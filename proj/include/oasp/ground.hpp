#pragma once
// Grounding of programs over a universe, Herbrand bases, and the inequality
// set used by predicate-collapsing translations.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oasp/ast.hpp"

namespace oasp {

// Names a ground instance after its rule and substitution, e.g. "r1[X=a]".
inline std::string instance_name(const std::string& base, const Subst& s) {
  if (s.empty()) return base;
  std::string n = base + "[";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) n += ",";
    first = false;
    n += v + "=" + t.name;
  }
  return n + "]";
}

// All instantiations of the free variables of every rule with universe
// elements. Quantified variables of generalized literals stay in place.
inline Program ground(const Program& p, const Universe& u) {
  Program g;
  for (const Rule& r : p.rules) {
    std::set<std::string> vs = rule_vars(r);
    std::vector<std::string> vars(vs.begin(), vs.end());
    for_each_assignment(u, vars, [&](const Subst& s) {
      Rule inst = substitute(s, r);
      inst.name = instance_name(r.name, s);
      g.rules.push_back(std::move(inst));
    });
  }
  normalize(g);
  std::sort(g.rules.begin(), g.rules.end());
  return g;
}

// Ground regular atoms over the program's signature and the universe.
inline std::set<Atom> herbrand_base(const Program& p, const Universe& u) {
  std::set<Atom> hb;
  for (const auto& [pred, arity] : program_signature(p)) {
    std::vector<std::string> vars;
    for (int i = 0; i < arity; ++i) vars.push_back("V" + std::to_string(i));
    for_each_assignment(u, vars, [&](const Subst& s) {
      Atom a{pred, {}};
      for (const std::string& v : vars) a.args.push_back(s.at(v));
      hb.insert(std::move(a));
    });
  }
  return hb;
}

// Inequalities separating a variable from every predicate name and the
// reserved filler constant; used when predicates become constants.
inline std::vector<Literal> in_set(const std::string& var_name, const Program& p) {
  std::set<std::string> names;
  for (const auto& [pred, arity] : program_signature(p)) {
    (void)arity;
    names.insert(pred);
  }
  names.insert(kZeroConstant);
  std::vector<Literal> out;
  for (const std::string& n : names)
    out.push_back(naf(eq_atom(var(var_name), cst(n))));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Literal> in_set(const std::vector<std::string>& vars,
                                   const Program& p) {
  std::vector<Literal> out;
  for (const std::string& v : vars) {
    auto one = in_set(v, p);
    out.insert(out.end(), one.begin(), one.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The universe a program must at least range over.
inline Universe minimal_universe(const Program& p) {
  auto cs = constants(p);
  return Universe::of({cs.begin(), cs.end()});
}

}  // namespace oasp
