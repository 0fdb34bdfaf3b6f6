#pragma once
// Core value types for open answer set programs: terms, atoms, literals,
// generalized literals, rules, programs, universes and interpretations.
// Everything is an immutable-by-convention value type with a total canonical
// order so that rendered output and search results are deterministic.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oasp {

struct SourceSpan {
  int line = 0;
  int col = 0;
  std::size_t offset = 0;
};

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Names beginning with '#' are reserved for generated symbols (#0, #p, #g1,
// rule atoms, aux predicates). User programs cannot introduce them.
inline bool reserved_name(const std::string& s) {
  return !s.empty() && s[0] == '#';
}

inline bool variable_name(const std::string& s) {
  return !s.empty() && s[0] >= 'A' && s[0] <= 'Z';
}

// Reserved constant used as filler in predicate-collapsing translations.
inline const std::string kZeroConstant = "#0";

enum class TermKind { Constant, Variable };

struct Term {
  TermKind kind = TermKind::Constant;
  std::string name;
};

inline Term cst(std::string name) { return {TermKind::Constant, std::move(name)}; }
inline Term var(std::string name) { return {TermKind::Variable, std::move(name)}; }

inline int cmp(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind == TermKind::Constant ? -1 : 1;
  return a.name.compare(b.name);
}
inline bool operator==(const Term& a, const Term& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return cmp(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return cmp(a, b) < 0; }

template <typename T>
int cmp_seq(const std::vector<T>& a, const std::vector<T>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (int c = cmp(a[i], b[i]); c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// The equality predicate is spelled "=" internally; it is always binary and
// never user-declared, so it cannot clash with program predicates.
inline const std::string kEqualityPred = "=";

struct Atom {
  std::string pred;
  std::vector<Term> args;

  bool is_equality() const { return pred == kEqualityPred; }
  bool ground() const {
    for (const Term& t : args)
      if (t.kind == TermKind::Variable) return false;
    return true;
  }
};

inline Atom atom(std::string pred, std::vector<Term> args = {}) {
  return {std::move(pred), std::move(args)};
}
inline Atom eq_atom(Term l, Term r) { return {kEqualityPred, {std::move(l), std::move(r)}}; }

inline int cmp(const Atom& a, const Atom& b) {
  if (int c = a.pred.compare(b.pred); c != 0) return c;
  return cmp_seq(a.args, b.args);
}
inline bool operator==(const Atom& a, const Atom& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Atom& a, const Atom& b) { return cmp(a, b) != 0; }
inline bool operator<(const Atom& a, const Atom& b) { return cmp(a, b) < 0; }

struct Literal {
  Atom atom;
  bool naf = false;  // negation as failure ("not")
};

inline Literal pos(Atom a) { return {std::move(a), false}; }
inline Literal naf(Atom a) { return {std::move(a), true}; }

inline int cmp(const Literal& a, const Literal& b) {
  if (a.naf != b.naf) return a.naf ? 1 : -1;
  return cmp(a.atom, b.atom);
}
inline bool operator==(const Literal& a, const Literal& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Literal& a, const Literal& b) { return cmp(a, b) != 0; }
inline bool operator<(const Literal& a, const Literal& b) { return cmp(a, b) < 0; }

// Boolean combination of atoms, used as the antecedent of a generalized
// literal. Shared subtrees are fine; nodes are never mutated after creation.
struct BoolFormula;
using BoolPtr = std::shared_ptr<const BoolFormula>;

struct BoolFormula {
  enum class Kind { Atom, Not, And, Or };
  Kind kind = Kind::Atom;
  Atom leaf;                  // Kind::Atom
  std::vector<BoolPtr> kids;  // Not: 1 child, And/Or: >= 1 child
};

inline BoolPtr batom(Atom a) {
  auto n = std::make_shared<BoolFormula>();
  n->kind = BoolFormula::Kind::Atom;
  n->leaf = std::move(a);
  return n;
}
inline BoolPtr bnot(BoolPtr f) {
  auto n = std::make_shared<BoolFormula>();
  n->kind = BoolFormula::Kind::Not;
  n->kids = {std::move(f)};
  return n;
}
inline BoolPtr bjoin(BoolFormula::Kind k, std::vector<BoolPtr> kids) {
  std::vector<BoolPtr> flat;  // same-kind children merge into one n-ary node
  for (BoolPtr& c : kids) {
    if (c->kind == k)
      flat.insert(flat.end(), c->kids.begin(), c->kids.end());
    else
      flat.push_back(std::move(c));
  }
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<BoolFormula>();
  n->kind = k;
  n->kids = std::move(flat);
  return n;
}
inline BoolPtr band(std::vector<BoolPtr> kids) {
  return bjoin(BoolFormula::Kind::And, std::move(kids));
}
inline BoolPtr bor(std::vector<BoolPtr> kids) {
  return bjoin(BoolFormula::Kind::Or, std::move(kids));
}

inline int cmp(const BoolPtr& a, const BoolPtr& b) {
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (a->kind == BoolFormula::Kind::Atom) return cmp(a->leaf, b->leaf);
  return cmp_seq(a->kids, b->kids);
}
inline bool operator==(const BoolPtr& a, const BoolPtr& b) = delete;

struct GeneralizedLiteral {
  std::vector<std::string> bound;  // quantified variables, all distinct
  BoolPtr antecedent;
  Atom consequent;
};

inline int cmp(const GeneralizedLiteral& a, const GeneralizedLiteral& b) {
  if (int c = cmp(a.consequent, b.consequent); c != 0) return c;
  if (a.bound != b.bound) return a.bound < b.bound ? -1 : 1;
  return cmp(a.antecedent, b.antecedent);
}
inline bool operator==(const GeneralizedLiteral& a, const GeneralizedLiteral& b) {
  return cmp(a, b) == 0;
}
inline bool operator<(const GeneralizedLiteral& a, const GeneralizedLiteral& b) {
  return cmp(a, b) < 0;
}

// A rule "head :- body." where the head holds at most one positive regular
// atom and no positive equality. Generalized literals occur only in bodies.
struct Rule {
  std::string name;  // unique within a program; auto-assigned when absent
  std::vector<Literal> head;
  std::vector<Literal> body;
  std::vector<GeneralizedLiteral> glits;
};

inline int cmp(const Rule& a, const Rule& b) {
  if (int c = cmp_seq(a.head, b.head); c != 0) return c;
  if (int c = cmp_seq(a.body, b.body); c != 0) return c;
  if (int c = cmp_seq(a.glits, b.glits); c != 0) return c;
  return a.name.compare(b.name);
}
inline bool operator==(const Rule& a, const Rule& b) { return cmp(a, b) == 0; }
inline bool operator<(const Rule& a, const Rule& b) { return cmp(a, b) < 0; }

struct Program {
  std::vector<Rule> rules;
};

inline bool operator==(const Program& a, const Program& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i)
    if (!(a.rules[i] == b.rules[i])) return false;
  return true;
}

// ---- projections ----

inline std::vector<Atom> head_pos(const Rule& r) {
  std::vector<Atom> out;
  for (const Literal& l : r.head)
    if (!l.naf) out.push_back(l.atom);
  return out;
}
inline std::vector<Atom> head_neg(const Rule& r) {
  std::vector<Atom> out;
  for (const Literal& l : r.head)
    if (l.naf) out.push_back(l.atom);
  return out;
}
inline std::vector<Atom> body_pos(const Rule& r) {
  std::vector<Atom> out;
  for (const Literal& l : r.body)
    if (!l.naf) out.push_back(l.atom);
  return out;
}
inline std::vector<Atom> body_neg(const Rule& r) {
  std::vector<Atom> out;
  for (const Literal& l : r.body)
    if (l.naf) out.push_back(l.atom);
  return out;
}

// A free rule is "q(t) v not q(t)." for a single regular atom.
inline bool is_free_rule(const Rule& r) {
  if (!r.body.empty() || !r.glits.empty() || r.head.size() != 2) return false;
  const Literal& a = r.head[0];
  const Literal& b = r.head[1];
  if (a.naf == b.naf || !(a.atom == b.atom)) return false;
  return !a.atom.is_equality();
}

inline bool is_constraint(const Rule& r) { return head_pos(r).empty() && head_neg(r).empty(); }

// ---- variable / constant / predicate collection ----

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Variable) out.insert(t.name);
}
inline void collect_vars(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_vars(t, out);
}
inline void collect_vars(const BoolPtr& f, std::set<std::string>& out) {
  if (f->kind == BoolFormula::Kind::Atom) {
    collect_vars(f->leaf, out);
  } else {
    for (const BoolPtr& k : f->kids) collect_vars(k, out);
  }
}

// Free variables of a generalized literal: variables of antecedent and
// consequent minus the quantified ones.
inline std::set<std::string> free_vars(const GeneralizedLiteral& g) {
  std::set<std::string> all;
  collect_vars(g.antecedent, all);
  collect_vars(g.consequent, all);
  for (const std::string& v : g.bound) all.erase(v);
  return all;
}

// Free variables of a rule; these are the variables grounding ranges over.
inline std::set<std::string> rule_vars(const Rule& r) {
  std::set<std::string> out;
  for (const Literal& l : r.head) collect_vars(l.atom, out);
  for (const Literal& l : r.body) collect_vars(l.atom, out);
  for (const GeneralizedLiteral& g : r.glits)
    for (const std::string& v : free_vars(g)) out.insert(v);
  return out;
}

inline bool is_ground(const Rule& r) { return rule_vars(r).empty(); }

inline void collect_constants(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Constant) out.insert(t.name);
}
inline void collect_constants(const Atom& a, std::set<std::string>& out) {
  for (const Term& t : a.args) collect_constants(t, out);
}
inline void collect_constants(const BoolPtr& f, std::set<std::string>& out) {
  if (f->kind == BoolFormula::Kind::Atom) {
    collect_constants(f->leaf, out);
  } else {
    for (const BoolPtr& k : f->kids) collect_constants(k, out);
  }
}
inline void collect_constants(const Rule& r, std::set<std::string>& out) {
  for (const Literal& l : r.head) collect_constants(l.atom, out);
  for (const Literal& l : r.body) collect_constants(l.atom, out);
  for (const GeneralizedLiteral& g : r.glits) {
    collect_constants(g.antecedent, out);
    collect_constants(g.consequent, out);
  }
}
inline std::set<std::string> constants(const Program& p) {
  std::set<std::string> out;
  for (const Rule& r : p.rules) collect_constants(r, out);
  return out;
}

inline void collect_atoms(const BoolPtr& f, std::vector<Atom>& out) {
  if (f->kind == BoolFormula::Kind::Atom) {
    out.push_back(f->leaf);
  } else {
    for (const BoolPtr& k : f->kids) collect_atoms(k, out);
  }
}
inline std::vector<Atom> all_atoms(const Rule& r) {
  std::vector<Atom> out;
  for (const Literal& l : r.head) out.push_back(l.atom);
  for (const Literal& l : r.body) out.push_back(l.atom);
  for (const GeneralizedLiteral& g : r.glits) {
    collect_atoms(g.antecedent, out);
    out.push_back(g.consequent);
  }
  return out;
}

// Predicate signature: name -> arity for every regular predicate.
inline std::map<std::string, int> program_signature(const Program& p) {
  std::map<std::string, int> sig;
  for (const Rule& r : p.rules) {
    for (const Atom& a : all_atoms(r)) {
      if (a.is_equality()) continue;
      auto it = sig.find(a.pred);
      if (it == sig.end()) {
        sig.emplace(a.pred, static_cast<int>(a.args.size()));
      } else if (it->second != static_cast<int>(a.args.size())) {
        throw ModelError("predicate '" + a.pred + "' used with arities " +
                         std::to_string(it->second) + " and " +
                         std::to_string(a.args.size()));
      }
    }
  }
  return sig;
}

// Structural invariants shared by every program the library accepts.
inline std::vector<std::string> validate(const Program& p) {
  std::vector<std::string> errs;
  std::set<std::string> names;
  for (const Rule& r : p.rules) {
    const std::string where = r.name.empty() ? "<unnamed>" : r.name;
    if (!r.name.empty() && !names.insert(r.name).second)
      errs.push_back("duplicate rule name '" + r.name + "'");
    int pos_head = 0;
    for (const Literal& l : r.head) {
      if (!l.naf) {
        if (l.atom.is_equality())
          errs.push_back(where + ": positive equality in head");
        else
          ++pos_head;
      }
    }
    if (pos_head > 1)
      errs.push_back(where + ": more than one positive atom in head");
    for (const Atom& a : all_atoms(r)) {
      if (a.is_equality() && a.args.size() != 2)
        errs.push_back(where + ": equality atom with arity != 2");
      for (const Term& t : a.args) {
        if (t.kind == TermKind::Variable && !variable_name(t.name))
          errs.push_back(where + ": variable with non-variable name '" + t.name + "'");
      }
    }
    for (const GeneralizedLiteral& g : r.glits) {
      std::set<std::string> seen;
      for (const std::string& v : g.bound) {
        if (!variable_name(v))
          errs.push_back(where + ": quantified non-variable '" + v + "'");
        if (!seen.insert(v).second)
          errs.push_back(where + ": repeated quantified variable '" + v + "'");
      }
      if (g.consequent.is_equality() && g.consequent.args.size() != 2)
        errs.push_back(where + ": malformed equality consequent");
    }
  }
  try {
    auto sig = program_signature(p);
    for (const auto& [pred, arity] : sig) {
      (void)arity;
      if (constants(p).count(pred))
        errs.push_back("name '" + pred + "' used as both predicate and constant");
    }
  } catch (const ModelError& e) {
    errs.push_back(e.what());
  }
  return errs;
}

inline void check_valid(const Program& p) {
  auto errs = validate(p);
  if (!errs.empty()) throw ModelError(errs.front());
}

// Assigns positional names rN to unnamed rules, skipping taken names.
inline void assign_rule_names(Program& p) {
  std::set<std::string> taken;
  for (const Rule& r : p.rules)
    if (!r.name.empty()) taken.insert(r.name);
  int next = 1;
  for (Rule& r : p.rules) {
    if (!r.name.empty()) continue;
    std::string cand;
    do {
      cand = "r" + std::to_string(next++);
    } while (taken.count(cand));
    taken.insert(cand);
    r.name = cand;
  }
}

// Canonical in-place ordering of the set-like parts of a rule.
inline void normalize(Rule& r) {
  std::sort(r.head.begin(), r.head.end());
  r.head.erase(std::unique(r.head.begin(), r.head.end()), r.head.end());
  std::sort(r.body.begin(), r.body.end());
  r.body.erase(std::unique(r.body.begin(), r.body.end()), r.body.end());
  std::sort(r.glits.begin(), r.glits.end());
  r.glits.erase(std::unique(r.glits.begin(), r.glits.end()), r.glits.end());
}
inline void normalize(Program& p) {
  for (Rule& r : p.rules) normalize(r);
}

// ---- substitution ----

using Subst = std::map<std::string, Term>;

inline Term substitute(const Subst& s, const Term& t) {
  if (t.kind == TermKind::Variable) {
    auto it = s.find(t.name);
    if (it != s.end()) return it->second;
  }
  return t;
}
inline Atom substitute(const Subst& s, const Atom& a) {
  Atom out{a.pred, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(s, t));
  return out;
}
inline Literal substitute(const Subst& s, const Literal& l) {
  return {substitute(s, l.atom), l.naf};
}
inline BoolPtr substitute(const Subst& s, const BoolPtr& f) {
  if (f->kind == BoolFormula::Kind::Atom) return batom(substitute(s, f->leaf));
  std::vector<BoolPtr> kids;
  kids.reserve(f->kids.size());
  for (const BoolPtr& k : f->kids) kids.push_back(substitute(s, k));
  auto n = std::make_shared<BoolFormula>();
  n->kind = f->kind;
  n->kids = std::move(kids);
  return n;
}
// Quantified variables shadow the substitution.
inline GeneralizedLiteral substitute(const Subst& s, const GeneralizedLiteral& g) {
  Subst inner = s;
  for (const std::string& v : g.bound) inner.erase(v);
  return {g.bound, substitute(inner, g.antecedent), substitute(inner, g.consequent)};
}
inline Rule substitute(const Subst& s, const Rule& r) {
  Rule out;
  out.name = r.name;
  for (const Literal& l : r.head) out.head.push_back(substitute(s, l));
  for (const Literal& l : r.body) out.body.push_back(substitute(s, l));
  for (const GeneralizedLiteral& g : r.glits) out.glits.push_back(substitute(s, g));
  return out;
}

// ---- universes and interpretations ----

struct Universe {
  std::vector<std::string> elements;  // kept sorted and unique

  static Universe of(std::vector<std::string> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return Universe{std::move(elems)};
  }
  bool contains(const std::string& e) const {
    return std::binary_search(elements.begin(), elements.end(), e);
  }
  std::size_t size() const { return elements.size(); }
};

inline bool operator==(const Universe& a, const Universe& b) {
  return a.elements == b.elements;
}

// An open interpretation (U, M): M holds ground regular atoms over U.
struct OpenInterpretation {
  Universe universe;
  std::set<Atom> atoms;

  bool holds(const Atom& a) const {
    if (a.is_equality()) return a.args[0] == a.args[1];
    return atoms.count(a) > 0;
  }
};

inline bool satisfies(const OpenInterpretation& i, const Literal& l) {
  return l.naf ? !i.holds(l.atom) : i.holds(l.atom);
}

inline bool satisfies(const OpenInterpretation& i, const BoolPtr& f) {
  switch (f->kind) {
    case BoolFormula::Kind::Atom:
      return i.holds(f->leaf);
    case BoolFormula::Kind::Not:
      return !satisfies(i, f->kids[0]);
    case BoolFormula::Kind::And:
      for (const BoolPtr& k : f->kids)
        if (!satisfies(i, k)) return false;
      return true;
    case BoolFormula::Kind::Or:
      for (const BoolPtr& k : f->kids)
        if (satisfies(i, k)) return true;
      return false;
  }
  return false;
}

// Enumerates all assignments of universe elements to the given variables.
template <typename Fn>
void for_each_assignment(const Universe& u, const std::vector<std::string>& vars,
                         Fn&& fn) {
  Subst s;
  if (vars.empty()) {
    fn(s);
    return;
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  const std::size_t n = u.elements.size();
  if (n == 0) return;
  for (;;) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      s[vars[i]] = cst(u.elements[idx[i]]);
    fn(s);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == n) idx[i++] = 0;
    if (i == idx.size()) break;
  }
}

// Truth of a closed generalized literal: every instantiation of the
// quantified variables with antecedent true must make the consequent true.
inline bool satisfies(const OpenInterpretation& i, const GeneralizedLiteral& g) {
  bool ok = true;
  for_each_assignment(i.universe, g.bound, [&](const Subst& s) {
    if (!ok) return;
    if (satisfies(i, substitute(s, g.antecedent)) && !i.holds(substitute(s, g.consequent)))
      ok = false;
  });
  return ok;
}

// Truth of a ground rule: body satisfied implies some head literal satisfied.
inline bool satisfies(const OpenInterpretation& i, const Rule& r) {
  for (const Literal& l : r.body)
    if (!satisfies(i, l)) return true;
  for (const GeneralizedLiteral& g : r.glits)
    if (!satisfies(i, g)) return true;
  for (const Literal& l : r.head)
    if (satisfies(i, l)) return true;
  return false;
}

inline bool satisfies(const OpenInterpretation& i, const Program& p) {
  for (const Rule& r : p.rules)
    if (!satisfies(i, r)) return false;
  return true;
}

}  // namespace oasp
