// Program-to-program constructions: arity packing into a single predicate,
// head-body guarding, explicit guard atoms, extensional free choice, and
// double-negation elimination of generalized literals.
#ifndef OASP_TRANSFORM_HPP
#define OASP_TRANSFORM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oasp/ast.hpp"
#include "oasp/ground.hpp"

namespace oasp {

// ---- size accounting ----
//
// Token-style counts used by the growth-bound checks: one unit per predicate
// symbol, term, naf marker, connective, and quantified variable.

inline std::size_t size_of(const Atom& a) { return 1 + a.args.size(); }
inline std::size_t size_of(const Literal& l) {
  return size_of(l.atom) + (l.naf ? 1 : 0);
}
inline std::size_t size_of(const BoolPtr& f) {
  if (f->kind == BoolFormula::Kind::Atom) return size_of(f->leaf);
  std::size_t n = 1;
  for (const BoolPtr& k : f->kids) n += size_of(k);
  return n;
}
inline std::size_t size_of(const GeneralizedLiteral& g) {
  return g.bound.size() + size_of(g.antecedent) + size_of(g.consequent);
}
inline std::size_t size_of(const Rule& r) {
  std::size_t n = 1;
  for (const Literal& l : r.head) n += size_of(l);
  for (const Literal& l : r.body) n += size_of(l);
  for (const GeneralizedLiteral& g : r.glits) n += size_of(g);
  return n;
}
inline std::size_t program_size(const Program& p) {
  std::size_t n = 0;
  for (const Rule& r : p.rules) n += size_of(r);
  return n;
}

// ---- fresh reserved names ----

inline std::string fresh_pred(const std::string& want, const Program& p) {
  std::set<std::string> taken;
  for (const auto& [pred, arity] : program_signature(p)) {
    (void)arity;
    taken.insert(pred);
  }
  for (const std::string& c : constants(p)) taken.insert(c);
  if (!taken.count(want)) return want;
  for (int i = 1;; ++i) {
    std::string cand = want + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

// ---- packing every predicate into one ----

inline const std::string kPackedPred = "#p";

// Inverse data for the packing translation: the packed predicate, its arity
// n (one above the widest original predicate), and the original signature.
// Tag constants reuse the original predicate names; fillers are #0.
struct AtomMapping {
  std::string p_pred;
  int p_arity = 0;
  std::map<std::string, int> original;
};

inline bool special_p_element(const std::string& name, const AtomMapping& m) {
  return name == kZeroConstant || m.original.count(name) != 0;
}

inline Atom to_p_atom(const Atom& a, const AtomMapping& m) {
  if (a.is_equality()) return a;
  Atom out{m.p_pred, {}};
  out.args.reserve(static_cast<std::size_t>(m.p_arity));
  for (const Term& t : a.args) out.args.push_back(t);
  for (std::size_t i = a.args.size(); i + 1 < static_cast<std::size_t>(m.p_arity); ++i)
    out.args.push_back(cst(kZeroConstant));
  out.args.push_back(cst(a.pred));
  return out;
}

// Recovers q(x) from #p(x,#0...,q); rejects "wrong" atoms whose payload
// positions mention a tag or filler element.
inline std::optional<Atom> from_p_atom(const Atom& a, const AtomMapping& m) {
  if (a.pred != m.p_pred || a.args.size() != static_cast<std::size_t>(m.p_arity))
    return std::nullopt;
  const Term& tag = a.args.back();
  if (tag.kind != TermKind::Constant) return std::nullopt;
  auto it = m.original.find(tag.name);
  if (it == m.original.end()) return std::nullopt;
  const int arity = it->second;
  for (std::size_t i = static_cast<std::size_t>(arity); i + 1 < a.args.size(); ++i) {
    const Term& t = a.args[i];
    if (t.kind != TermKind::Constant || t.name != kZeroConstant) return std::nullopt;
  }
  Atom out{tag.name, {}};
  for (int i = 0; i < arity; ++i) {
    const Term& t = a.args[static_cast<std::size_t>(i)];
    if (t.kind == TermKind::Constant && special_p_element(t.name, m))
      return std::nullopt;
    out.args.push_back(t);
  }
  return out;
}

inline std::set<Atom> to_p_atoms(const std::set<Atom>& atoms, const AtomMapping& m) {
  std::set<Atom> out;
  for (const Atom& a : atoms) out.insert(to_p_atom(a, m));
  return out;
}

// Projects an interpretation of the packed program back; wrong atoms drop out.
inline std::set<Atom> project_p_atoms(const std::set<Atom>& atoms,
                                      const AtomMapping& m) {
  std::set<Atom> out;
  for (const Atom& a : atoms)
    if (auto q = from_p_atom(a, m)) out.insert(*q);
  return out;
}

// Universe the packed program ranges over: the original one plus the tag
// constants and the filler.
inline Universe p_universe(const Universe& u, const AtomMapping& m) {
  std::vector<std::string> elems = u.elements;
  for (const auto& [pred, arity] : m.original) {
    (void)arity;
    elems.push_back(pred);
  }
  elems.push_back(kZeroConstant);
  return Universe::of(std::move(elems));
}

struct PProgram {
  Program program;
  AtomMapping mapping;
};

namespace detail {
inline BoolPtr pack_formula(const BoolPtr& f, const AtomMapping& m) {
  if (f->kind == BoolFormula::Kind::Atom) return batom(to_p_atom(f->leaf, m));
  std::vector<BoolPtr> kids;
  kids.reserve(f->kids.size());
  for (const BoolPtr& k : f->kids) kids.push_back(pack_formula(k, m));
  if (f->kind == BoolFormula::Kind::Not) return bnot(kids[0]);
  return bjoin(f->kind, std::move(kids));
}
}  // namespace detail

// Rewrites P over a single fresh predicate.  Every m-ary atom q(t) becomes
// #p(t,#0...,q); each non-free rule keeps its variables away from the new
// constants with inequalities, and quantified variables get the same
// inequalities conjoined to their antecedent.  Free rules translate head-only.
inline PProgram to_p_program(const Program& p) {
  check_valid(p);
  if (constants(p).count(kZeroConstant))
    throw ModelError("to_p_program: constant '" + kZeroConstant + "' is reserved");
  AtomMapping m;
  m.p_pred = fresh_pred(kPackedPred, p);
  m.original = program_signature(p);
  int maxar = 0;
  for (const auto& [pred, arity] : m.original) {
    (void)pred;
    maxar = std::max(maxar, arity);
  }
  m.p_arity = maxar + 1;

  Program out;
  out.rules.reserve(p.rules.size());
  for (const Rule& r : p.rules) {
    Rule nr;
    nr.name = r.name;
    for (const Literal& l : r.head) nr.head.push_back({to_p_atom(l.atom, m), l.naf});
    for (const Literal& l : r.body) nr.body.push_back({to_p_atom(l.atom, m), l.naf});
    for (const GeneralizedLiteral& g : r.glits) {
      GeneralizedLiteral ng;
      ng.bound = g.bound;
      std::vector<BoolPtr> conj{detail::pack_formula(g.antecedent, m)};
      for (const std::string& y : g.bound)
        for (const Literal& l : in_set(y, p)) conj.push_back(bnot(batom(l.atom)));
      ng.antecedent = band(std::move(conj));
      ng.consequent = to_p_atom(g.consequent, m);
      nr.glits.push_back(std::move(ng));
    }
    if (!is_free_rule(r)) {
      const std::set<std::string> vset = rule_vars(r);
      const std::vector<std::string> vs(vset.begin(), vset.end());
      for (const Literal& l : in_set(vs, p)) nr.body.push_back(l);
    }
    out.rules.push_back(std::move(nr));
  }
  normalize(out);
  check_valid(out);
  return {std::move(out), std::move(m)};
}

// ---- moving body atoms into heads ----

// Extends each non-free rule's head with the naf of every positive body atom;
// the body keeps its own guard, so the head acquires one too.
inline Program hbg(const Program& p) {
  Program out = p;
  for (Rule& r : out.rules) {
    if (is_free_rule(r)) continue;
    for (const Atom& a : body_pos(r)) r.head.push_back(naf(a));
    normalize(r);
  }
  return out;
}

// ---- explicit guard atoms ----

inline const std::string kGuardPredWant = "#g";

// Adds a guard atom per variable pair of every rule plus facts covering all
// constant pairs, making any program loosely guarded at the price of
// restricting rule applicability to the program's constants.
inline Program gua(const Program& p) {
  check_valid(p);
  const std::set<std::string> cs = constants(p);
  if (cs.empty())
    throw ModelError("gua: needs at least one constant to seed guard facts");
  const std::string g = fresh_pred(kGuardPredWant, p);
  Program out = p;
  for (Rule& r : out.rules) {
    const std::set<std::string> vset = rule_vars(r);
    const std::vector<std::string> vs(vset.begin(), vset.end());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i; j < vs.size(); ++j)
        r.body.push_back(pos(atom(g, {var(vs[i]), var(vs[j])})));
    normalize(r);
  }
  for (const std::string& a : cs)
    for (const std::string& b : cs) {
      Rule fact;
      fact.head = {pos(atom(g, {cst(a), cst(b)}))};
      out.rules.push_back(std::move(fact));
    }
  assign_rule_names(out);
  normalize(out);
  return out;
}

inline std::set<Atom> strip_guard_atoms(const std::set<Atom>& atoms,
                                        const std::string& guard_pred) {
  std::set<Atom> out;
  for (const Atom& a : atoms)
    if (a.pred != guard_pred) out.insert(a);
  return out;
}

// ---- free choice for extensional predicates ----

// Predicates that never occur in a head get a free rule, so input relations
// may be guessed arbitrarily.
inline Program free_choice(const Program& p) {
  check_valid(p);
  std::set<std::string> head_preds;
  for (const Rule& r : p.rules)
    for (const Literal& l : r.head)
      if (!l.atom.is_equality()) head_preds.insert(l.atom.pred);
  Program out = p;
  for (const auto& [pred, arity] : program_signature(p)) {
    if (head_preds.count(pred)) continue;
    Atom a{pred, {}};
    for (int i = 1; i <= arity; ++i) a.args.push_back(var("X" + std::to_string(i)));
    Rule fr;
    fr.head = {pos(a), naf(a)};
    out.rules.push_back(std::move(fr));
  }
  assign_rule_names(out);
  normalize(out);
  return out;
}

// ---- double negation for generalized literals ----

// True when no predicate depends on itself through rule bodies or
// generalized literals.
inline bool recursion_free(const Program& p) {
  std::map<std::string, std::set<std::string>> dep;
  for (const Rule& r : p.rules) {
    std::set<std::string> uses;
    for (const Literal& l : r.body)
      if (!l.atom.is_equality()) uses.insert(l.atom.pred);
    for (const GeneralizedLiteral& g : r.glits) {
      std::vector<Atom> as;
      collect_atoms(g.antecedent, as);
      as.push_back(g.consequent);
      for (const Atom& a : as)
        if (!a.is_equality()) uses.insert(a.pred);
    }
    for (const Literal& l : r.head)
      if (!l.atom.is_equality())
        dep[l.atom.pred].insert(uses.begin(), uses.end());
  }
  // Depth-first cycle detection over the dependency graph.
  std::map<std::string, int> state;  // 0 unseen, 1 open, 2 done
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (const auto& [start, ignored] : dep) {
    (void)ignored;
    if (state[start]) continue;
    stack.push_back({start, 0});
    state[start] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto it = dep.find(u);
      const std::size_t fan = it == dep.end() ? 0 : it->second.size();
      if (next >= fan) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      auto vit = it->second.begin();
      std::advance(vit, next++);
      const std::string& v = *vit;
      if (state[v] == 1) return false;
      if (state[v] == 0) {
        state[v] = 1;
        stack.push_back({v, 0});
      }
    }
  }
  return true;
}

// Replaces each generalized literal forall Y (a => b) by not aux, with a new
// rule aux(free vars) <- a, not b.  Sound only without recursion, which is
// why the precondition is enforced.
inline Program double_negation(const Program& p) {
  check_valid(p);
  if (!recursion_free(p))
    throw ModelError("double_negation: program is not recursion-free");
  bool any = false;
  for (const Rule& r : p.rules) any = any || !r.glits.empty();
  if (!any) return p;

  int next_aux = 1;
  for (const auto& [pred, arity] : program_signature(p)) {
    (void)arity;
    if (pred.rfind("#d", 0) == 0) {
      const std::string tail = pred.substr(2);
      if (!tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos)
        next_aux = std::max(next_aux, std::stoi(tail) + 1);
    }
  }

  Program out;
  std::vector<Rule> aux_rules;
  for (const Rule& r : p.rules) {
    Rule nr = r;
    nr.glits.clear();
    for (const GeneralizedLiteral& g : r.glits) {
      if (g.antecedent->kind != BoolFormula::Kind::Atom)
        throw ModelError(
            "double_negation: unsupported generalized literal; the antecedent "
            "must be a single atom");
      const std::string aux = "#d" + std::to_string(next_aux++);
      Atom head{aux, {}};
      for (const std::string& v : free_vars(g)) head.args.push_back(var(v));
      nr.body.push_back(naf(head));
      Rule ar;
      ar.head = {pos(head)};
      ar.body = {pos(g.antecedent->leaf), naf(g.consequent)};
      aux_rules.push_back(std::move(ar));
    }
    out.rules.push_back(std::move(nr));
  }
  for (Rule& ar : aux_rules) out.rules.push_back(std::move(ar));
  assign_rule_names(out);
  normalize(out);
  check_valid(out);
  return out;
}

}  // namespace oasp

#endif  // OASP_TRANSFORM_HPP
