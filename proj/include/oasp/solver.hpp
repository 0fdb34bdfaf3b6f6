#pragma once
// Enumeration of open answer sets over a fixed universe and bounded
// satisfiability over growing universes.
//
// Two engines share a compiled ground form:
//  * a split engine that guesses the atoms of free rules and completes the
//    remainder by stratified derivation (used when the non-free part has no
//    recursion through naf and no naf heads on deriving rules);
//  * a recursive assignment search over the derivable atoms with
//    model-style pruning, used otherwise.
// Every emitted set is re-verified against the reduct semantics.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "oasp/ast.hpp"
#include "oasp/ground.hpp"
#include "oasp/semantics.hpp"

namespace oasp {

class ResourceError : public ModelError {
 public:
  explicit ResourceError(const std::string& what) : ModelError(what) {}
};

struct SolveBudget {
  std::size_t max_search_atoms = 24;        // atom cap for the recursive engine
  std::size_t max_free_guesses = 1u << 21;  // guesses in the split/basis engines
  int workers = 1;
  bool force_recursive = false;  // use only the recursive engine (for testing)
};

struct AnswerSet {
  std::set<Atom> atoms;
  std::map<Atom, int> depth;  // derivation stage per atom
};

// Return false to stop the enumeration early.
using AnswerSetFn = std::function<bool(const AnswerSet&)>;

namespace detail {

// Three-valued boolean over compiled atom ids: -1 unknown, 0 false, 1 true.
struct BExpr {
  enum class Kind { Const, Leaf, Not, And, Or };
  Kind kind = Kind::Const;
  bool cval = false;
  int id = -1;
  std::vector<BExpr> kids;

  int eval3(const std::vector<int8_t>& val) const {
    switch (kind) {
      case Kind::Const:
        return cval ? 1 : 0;
      case Kind::Leaf:
        return val[id];
      case Kind::Not: {
        int v = kids[0].eval3(val);
        return v < 0 ? -1 : 1 - v;
      }
      case Kind::And: {
        bool unknown = false;
        for (const BExpr& k : kids) {
          int v = k.eval3(val);
          if (v == 0) return 0;
          if (v < 0) unknown = true;
        }
        return unknown ? -1 : 1;
      }
      case Kind::Or: {
        bool unknown = false;
        for (const BExpr& k : kids) {
          int v = k.eval3(val);
          if (v == 1) return 1;
          if (v < 0) unknown = true;
        }
        return unknown ? -1 : 0;
      }
    }
    return -1;
  }
};

struct CompiledGlit {
  BExpr ante;
  int cons_id = -1;       // derivable consequent
  int cons_const = -1;    // 0/1 when the consequent's truth is fixed
};

struct CompiledRule {
  bool free_rule = false;
  bool dead = false;          // can never fire / never appears in a reduct
  int head_id = -1;           // positive head atom id, -1 for constraints
  std::vector<int> head_neg;  // naf head atom ids (must hold for presence)
  std::vector<int> body_pos;
  std::vector<int> body_neg;
  std::vector<CompiledGlit> glits;  // instance-expanded

  // 1: body satisfied, 0: body unsatisfiable, -1: undecided.
  int body_status(const std::vector<int8_t>& val) const {
    bool unknown = false;
    for (int id : body_pos) {
      int v = val[id];
      if (v == 0) return 0;
      if (v < 0) unknown = true;
    }
    for (int id : body_neg) {
      int v = val[id];
      if (v == 1) return 0;
      if (v < 0) unknown = true;
    }
    for (const CompiledGlit& g : glits) {
      int a = g.ante.eval3(val);
      int c = g.cons_const >= 0 ? g.cons_const : val[g.cons_id];
      // instance satisfied iff ante false or cons true
      if (a == 1 && c == 0) return 0;
      if (!(a == 0 || c == 1)) unknown = true;
    }
    return unknown ? -1 : 1;
  }
};

struct CompiledProgram {
  std::vector<Atom> atoms;  // derivable atoms (heads of ground rules)
  std::map<Atom, int> id;
  std::vector<CompiledRule> rules;
  std::vector<int> free_atoms;  // ids with a free rule
};

inline BExpr compile_bool(const BoolPtr& f, const CompiledProgram& cp) {
  BExpr e;
  switch (f->kind) {
    case BoolFormula::Kind::Atom: {
      const Atom& a = f->leaf;
      if (a.is_equality()) {
        e.kind = BExpr::Kind::Const;
        e.cval = a.args[0] == a.args[1];
        return e;
      }
      auto it = cp.id.find(a);
      if (it == cp.id.end()) {
        e.kind = BExpr::Kind::Const;
        e.cval = false;
      } else {
        e.kind = BExpr::Kind::Leaf;
        e.id = it->second;
      }
      return e;
    }
    case BoolFormula::Kind::Not:
      e.kind = BExpr::Kind::Not;
      e.kids.push_back(compile_bool(f->kids[0], cp));
      return e;
    case BoolFormula::Kind::And:
    case BoolFormula::Kind::Or:
      e.kind = f->kind == BoolFormula::Kind::And ? BExpr::Kind::And : BExpr::Kind::Or;
      for (const BoolPtr& k : f->kids) e.kids.push_back(compile_bool(k, cp));
      return e;
  }
  return e;
}

inline CompiledProgram compile(const Program& ground_p, const Universe& u) {
  CompiledProgram cp;
  for (const Rule& r : ground_p.rules)
    for (const Atom& a : head_pos(r))
      if (cp.id.emplace(a, 0).second) cp.atoms.push_back(a);
  std::sort(cp.atoms.begin(), cp.atoms.end());
  for (std::size_t i = 0; i < cp.atoms.size(); ++i) cp.id[cp.atoms[i]] = static_cast<int>(i);

  std::set<int> free_ids;
  for (const Rule& r : ground_p.rules) {
    CompiledRule cr;
    cr.free_rule = is_free_rule(r);
    if (cr.free_rule) {
      cr.head_id = cp.id.at(r.head[0].atom);
      free_ids.insert(cr.head_id);
      cp.rules.push_back(std::move(cr));
      continue;
    }
    auto hp = head_pos(r);
    if (!hp.empty()) cr.head_id = cp.id.at(hp[0]);
    for (const Atom& a : head_neg(r)) {
      if (a.is_equality()) {
        if (!(a.args[0] == a.args[1])) cr.dead = true;  // can never be in a reduct
        continue;
      }
      auto it = cp.id.find(a);
      if (it == cp.id.end()) {
        cr.dead = true;  // requires an underivable atom to hold
        continue;
      }
      cr.head_neg.push_back(it->second);
    }
    for (const Literal& l : r.body) {
      if (l.atom.is_equality()) {
        bool t = l.atom.args[0] == l.atom.args[1];
        if (t == l.naf) cr.dead = true;
        continue;
      }
      auto it = cp.id.find(l.atom);
      if (it == cp.id.end()) {
        if (!l.naf) cr.dead = true;  // positive atom that can never hold
        continue;                    // naf over underivable atom is true
      }
      (l.naf ? cr.body_neg : cr.body_pos).push_back(it->second);
    }
    for (const GeneralizedLiteral& g : r.glits) {
      for_each_assignment(u, g.bound, [&](const Subst& s) {
        CompiledGlit cg;
        cg.ante = compile_bool(substitute(s, g.antecedent), cp);
        Atom c = substitute(s, g.consequent);
        if (c.is_equality()) {
          cg.cons_const = c.args[0] == c.args[1] ? 1 : 0;
        } else {
          auto it = cp.id.find(c);
          if (it == cp.id.end())
            cg.cons_const = 0;
          else
            cg.cons_id = it->second;
        }
        cr.glits.push_back(std::move(cg));
      });
    }
    cp.rules.push_back(std::move(cr));
  }
  cp.free_atoms.assign(free_ids.begin(), free_ids.end());
  return cp;
}

inline void collect_bexpr_leaves(const BExpr& e, std::vector<int>& out) {
  if (e.kind == BExpr::Kind::Leaf) out.push_back(e.id);
  for (const BExpr& k : e.kids) collect_bexpr_leaves(k, out);
}

// Strata for the split engine: derived atoms (non-free heads) must not
// depend on each other through naf, naf heads, or glit antecedents within a
// cycle. Returns per-atom stratum or nullopt when the shape does not fit.
inline std::optional<std::vector<int>> conditional_strata(const CompiledProgram& cp) {
  const int n = static_cast<int>(cp.atoms.size());
  std::set<int> free_set(cp.free_atoms.begin(), cp.free_atoms.end());
  std::vector<std::vector<std::pair<int, bool>>> edges(n);  // (dep, negative?)
  for (const CompiledRule& r : cp.rules) {
    if (r.free_rule || r.dead) continue;
    if (r.head_id < 0) continue;  // constraints impose nothing on derivation
    if (!r.head_neg.empty()) return std::nullopt;  // naf head on a deriving rule
    int h = r.head_id;
    auto add = [&](int dep, bool negd) {
      if (!free_set.count(dep)) edges[h].push_back({dep, negd});
    };
    for (int d : r.body_pos) add(d, false);
    for (int d : r.body_neg) add(d, true);
    for (const CompiledGlit& g : r.glits) {
      std::vector<int> leaves;
      collect_bexpr_leaves(g.ante, leaves);
      for (int d : leaves) add(d, true);
      if (g.cons_id >= 0) add(g.cons_id, false);
    }
  }
  // Tarjan SCC over derived atoms.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on(n, false);
  int next_index = 0, ncomp = 0;
  std::vector<std::tuple<int, std::size_t>> work;
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1 || free_set.count(start)) continue;
    work.push_back({start, 0});
    while (!work.empty()) {
      auto& [v, ei] = work.back();
      if (ei == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on[v] = true;
      }
      bool descended = false;
      while (ei < edges[v].size()) {
        int w = edges[v][ei].first;
        ++ei;
        if (index[w] == -1) {
          work.push_back({w, 0});
          descended = true;
          break;
        }
        if (on[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      int vv = v;
      work.pop_back();
      if (!work.empty()) {
        int parent = std::get<0>(work.back());
        low[parent] = std::min(low[parent], low[vv]);
      }
    }
  }
  // Negative edge inside one SCC -> recursion through naf.
  for (int v = 0; v < n; ++v) {
    if (comp[v] < 0) continue;
    for (auto [w, negd] : edges[v])
      if (negd && comp[w] == comp[v]) return std::nullopt;
  }
  // Stratum = longest chain of negative edges, computed over the SCC dag.
  // Tarjan numbers components in reverse topological order.
  std::vector<int> stratum(n, 0);
  std::vector<std::pair<int, int>> order;  // (component, atom)
  for (int v = 0; v < n; ++v)
    if (comp[v] >= 0) order.push_back({comp[v], v});
  std::sort(order.begin(), order.end());
  for (auto [c, v] : order) {
    (void)c;
    for (auto [w, negd] : edges[v])
      stratum[v] = std::max(stratum[v], stratum[w] + (negd ? 1 : 0));
  }
  // Atoms in one SCC share a stratum.
  std::vector<int> comp_stratum(ncomp, 0);
  for (int v = 0; v < n; ++v)
    if (comp[v] >= 0) comp_stratum[comp[v]] = std::max(comp_stratum[comp[v]], stratum[v]);
  for (int v = 0; v < n; ++v)
    if (comp[v] >= 0) stratum[v] = comp_stratum[comp[v]];
  return stratum;
}

// Atoms whose final truth value a reduct depends on: free-rule heads plus
// every atom in a negative position of a deriving rule (naf body, naf head,
// generalized-literal antecedent).  Guessing these makes the reduct definite.
inline std::vector<int> guess_basis(const CompiledProgram& cp) {
  std::set<int> basis(cp.free_atoms.begin(), cp.free_atoms.end());
  for (const CompiledRule& r : cp.rules) {
    if (r.free_rule || r.dead || r.head_id < 0) continue;
    for (int id : r.head_neg) basis.insert(id);
    for (int id : r.body_neg) basis.insert(id);
    for (const CompiledGlit& g : r.glits) {
      std::vector<int> leaves;
      collect_bexpr_leaves(g.ante, leaves);
      for (int id : leaves) basis.insert(id);
    }
  }
  return {basis.begin(), basis.end()};
}

// Least model of the reduct selected by one guess of the basis atoms; false
// when the guess is inconsistent with what gets derived or a constraint
// fires.  `fixed` holds the guessed final values, `val` the derivation.
inline bool derive_guess(const CompiledProgram& cp, const std::vector<int>& basis,
                         uint64_t guess, std::vector<int8_t>& val,
                         std::vector<int8_t>& fixed) {
  std::fill(val.begin(), val.end(), 0);
  std::fill(fixed.begin(), fixed.end(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (guess & (uint64_t(1) << i)) fixed[basis[i]] = 1;
  for (int f : cp.free_atoms) val[f] = fixed[f];  // justified by the free rule
  bool changed = true;
  while (changed) {
    changed = false;
    for (const CompiledRule& r : cp.rules) {
      if (r.free_rule || r.dead || r.head_id < 0) continue;
      if (val[r.head_id] == 1) continue;
      bool fires = true;
      for (int id : r.head_neg)  // presence in the reduct
        if (fixed[id] != 1) { fires = false; break; }
      if (fires)
        for (int id : r.body_pos)
          if (val[id] != 1) { fires = false; break; }
      if (fires)
        for (int id : r.body_neg)
          if (fixed[id] == 1) { fires = false; break; }
      if (fires)
        for (const CompiledGlit& g : r.glits) {
          if (g.ante.eval3(fixed) != 1) continue;  // instance drops out
          int c = g.cons_const >= 0 ? g.cons_const : val[g.cons_id];
          if (c != 1) { fires = false; break; }
        }
      if (fires) {
        val[r.head_id] = 1;
        changed = true;
      }
    }
  }
  for (int b : basis)
    if (val[b] != fixed[b]) return false;
  for (const CompiledRule& r : cp.rules) {
    if (r.free_rule || r.dead || r.head_id >= 0) continue;
    bool present = true;
    for (int id : r.head_neg)
      if (val[id] != 1) { present = false; break; }
    if (present && r.body_status(val) == 1) return false;
  }
  return true;
}

// Derives the unique candidate for one guess of the free atoms. Returns
// false when a constraint or the guess itself is contradicted.
inline bool derive_split(const CompiledProgram& cp, const std::vector<int>& strata,
                         uint64_t guess, std::vector<int8_t>& val) {
  const int n = static_cast<int>(cp.atoms.size());
  std::fill(val.begin(), val.end(), 0);
  for (std::size_t i = 0; i < cp.free_atoms.size(); ++i)
    if (guess & (uint64_t(1) << i)) val[cp.free_atoms[i]] = 1;
  int max_stratum = 0;
  for (int v = 0; v < n; ++v) max_stratum = std::max(max_stratum, strata[v]);
  for (int s = 0; s <= max_stratum; ++s) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const CompiledRule& r : cp.rules) {
        if (r.free_rule || r.dead || r.head_id < 0) continue;
        if (strata[r.head_id] != s || val[r.head_id] == 1) continue;
        if (r.body_status(val) == 1) {
          val[r.head_id] = 1;
          changed = true;
        }
      }
    }
  }
  // Guess consistency: derivation must not add free atoms beyond the guess.
  for (std::size_t i = 0; i < cp.free_atoms.size(); ++i) {
    bool guessed = (guess & (uint64_t(1) << i)) != 0;
    if (!guessed && val[cp.free_atoms[i]] == 1) return false;
  }
  // Constraints and naf-headed rules.
  for (const CompiledRule& r : cp.rules) {
    if (r.free_rule || r.dead || r.head_id >= 0) continue;
    bool present = true;
    for (int id : r.head_neg)
      if (val[id] != 1) { present = false; break; }
    if (present && r.body_status(val) == 1) return false;
  }
  return true;
}

}  // namespace detail

// Enumerates open answer sets of P over U in engine order, re-verifying
// each candidate against the reduct semantics before emission.
inline void enumerate_open_answer_sets(const Program& p, const Universe& u,
                                       const SolveBudget& budget, const AnswerSetFn& fn) {
  if (u.size() == 0) return;
  for (const std::string& c : constants(p))
    if (!u.contains(c))
      throw ModelError("universe misses constant '" + c + "'");
  Program g = ground(p, u);
  detail::CompiledProgram cp = detail::compile(g, u);
  const std::size_t n = cp.atoms.size();

  auto emit = [&](const std::vector<int8_t>& val) -> bool {
    AnswerSet as;
    for (std::size_t i = 0; i < n; ++i)
      if (val[i] == 1) as.atoms.insert(cp.atoms[i]);
    OpenInterpretation interp{u, as.atoms};
    CheckResult chk = is_answer_set(g, interp);
    if (!chk.ok) return true;  // pruned candidate, keep searching
    as.depth = std::move(chk.depth);
    return fn(as);
  };

  if (!budget.force_recursive) {
    std::optional<std::vector<int>> strata = detail::conditional_strata(cp);
    if (strata && cp.free_atoms.size() <= 62) {
      const std::size_t k = cp.free_atoms.size();
      uint64_t total = uint64_t(1) << k;
      if (total > budget.max_free_guesses)
        throw ResourceError("free-rule guess space exceeds budget (2^" +
                            std::to_string(k) + ")");
      std::vector<int8_t> val(n, 0);
      for (uint64_t guess = 0; guess < total; ++guess) {
        if (!detail::derive_split(cp, *strata, guess, val)) continue;
        if (!emit(val)) return;
      }
      return;
    }
    const std::vector<int> basis = detail::guess_basis(cp);
    if (basis.size() > 62 ||
        (uint64_t(1) << basis.size()) > budget.max_free_guesses)
      throw ResourceError("guess space exceeds budget (2^" +
                          std::to_string(basis.size()) + ")");
    const uint64_t total = uint64_t(1) << basis.size();
    std::vector<int8_t> val(n, 0), fixed(n, 0);
    for (uint64_t guess = 0; guess < total; ++guess) {
      if (!detail::derive_guess(cp, basis, guess, val, fixed)) continue;
      if (!emit(val)) return;
    }
    return;
  }

  if (n > budget.max_search_atoms)
    throw ResourceError("assignment search over " + std::to_string(n) +
                        " atoms exceeds budget of " +
                        std::to_string(budget.max_search_atoms));
  std::vector<int8_t> val(n, -1);
  bool stop = false;
  // Depth-first over atom ids; prune when a rule is classically violated.
  std::function<void(std::size_t)> rec = [&](std::size_t d) {
    if (stop) return;
    for (const detail::CompiledRule& r : cp.rules) {
      if (r.dead) continue;
      if (r.free_rule) continue;
      int body = r.body_status(val);
      if (body != 1) continue;
      bool head_sat = false, head_unknown = false;
      if (r.head_id >= 0) {
        int v = val[r.head_id];
        if (v == 1) head_sat = true;
        if (v < 0) head_unknown = true;
      }
      // A naf head literal satisfied by the candidate means the atom is
      // absent; that also protects the rule classically.
      for (int id : r.head_neg) {
        int v = val[id];
        if (v == 0) head_sat = true;
        if (v < 0) head_unknown = true;
      }
      if (!head_sat && !head_unknown) return;  // violated, prune
    }
    if (d == n) {
      if (!emit(val)) stop = true;
      return;
    }
    for (int8_t b : {int8_t(0), int8_t(1)}) {
      val[d] = b;
      rec(d + 1);
      if (stop) return;
    }
    val[d] = -1;
  };
  rec(0);
}

inline std::vector<AnswerSet> enumerate_open_answer_sets(const Program& p,
                                                         const Universe& u,
                                                         const SolveBudget& budget = {}) {
  std::vector<AnswerSet> out;
  enumerate_open_answer_sets(p, u, budget, [&](const AnswerSet& as) {
    out.push_back(as);
    return true;
  });
  std::sort(out.begin(), out.end(),
            [](const AnswerSet& a, const AnswerSet& b) { return a.atoms < b.atoms; });
  return out;
}

// Answer sets in the classical sense: the universe is exactly the program's
// constants.
inline std::vector<AnswerSet> classical_answer_sets(const Program& p,
                                                    const SolveBudget& budget = {}) {
  auto cs = constants(p);
  if (cs.empty())
    throw ModelError("classical answer sets need at least one constant");
  return enumerate_open_answer_sets(p, Universe::of({cs.begin(), cs.end()}), budget);
}

enum class SatStatus { Sat, UnsatUpToBound, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  std::optional<Universe> universe;
  std::optional<std::set<Atom>> witness;
  std::map<Atom, int> witness_depth;
  int bound_reached = -1;  // largest number of fresh elements fully searched
};

// Fresh universe element names that collide with nothing in the program.
inline std::vector<std::string> fresh_elements(const Program& p, int count) {
  std::set<std::string> taken = constants(p);
  for (const auto& [pred, arity] : program_signature(p)) {
    (void)arity;
    taken.insert(pred);
  }
  std::vector<std::string> out;
  int i = 1;
  while (static_cast<int>(out.size()) < count) {
    std::string cand = "u" + std::to_string(i++);
    if (!taken.count(cand)) out.push_back(cand);
  }
  return out;
}

// Searches universes with 0..max_fresh fresh elements beyond the constants
// for an open answer set containing an atom of the queried predicate.
inline SatResult satisfiable_up_to(const Program& p, const std::string& query_pred,
                                   int max_fresh, const SolveBudget& budget = {}) {
  auto sig = program_signature(p);
  auto it = sig.find(query_pred);
  if (it == sig.end())
    throw ModelError("unknown predicate '" + query_pred + "'");

  // A free query predicate is routed through a copy rule so the search
  // tracks a non-free target.
  bool query_free = false;
  for (const Rule& r : p.rules)
    if (is_free_rule(r) && r.head[0].atom.pred == query_pred) query_free = true;
  Program solve_p = p;
  std::string target = query_pred;
  if (query_free) {
    Rule copy;
    copy.name = "#query";
    target = "#q";
    for (int i = 2; sig.count(target); ++i) target = "#q" + std::to_string(i);
    Atom head{target, {}};
    Atom src{query_pred, {}};
    for (int i = 0; i < it->second; ++i) {
      head.args.push_back(var("X" + std::to_string(i + 1)));
      src.args.push_back(var("X" + std::to_string(i + 1)));
    }
    copy.head.push_back(pos(head));
    copy.body.push_back(pos(src));
    solve_p.rules.push_back(copy);
    assign_rule_names(solve_p);
    normalize(solve_p);
  }

  SatResult res;
  auto cs = constants(p);
  std::vector<std::string> fresh = fresh_elements(solve_p, max_fresh);
  bool resource_hit = false;
  for (int k = 0; k <= max_fresh; ++k) {
    std::vector<std::string> elems(cs.begin(), cs.end());
    for (int i = 0; i < k; ++i) elems.push_back(fresh[i]);
    if (elems.empty()) continue;
    Universe u = Universe::of(elems);
    bool found = false;
    AnswerSet hit;
    try {
      enumerate_open_answer_sets(solve_p, u, budget, [&](const AnswerSet& as) {
        for (const Atom& a : as.atoms)
          if (a.pred == target) {
            found = true;
            hit = as;
            return false;
          }
        return true;
      });
    } catch (const ResourceError&) {
      resource_hit = true;
      break;
    }
    if (found) {
      std::set<Atom> stripped;
      for (const Atom& a : hit.atoms)
        if (!reserved_name(a.pred) || !query_free || a.pred != target)
          stripped.insert(a);
      OpenInterpretation wi{u, stripped};
      CheckResult chk = is_open_answer_set(p, wi);
      if (!chk.ok)
        throw ModelError("internal: stripped witness fails verification: " + chk.reason);
      res.status = SatStatus::Sat;
      res.universe = u;
      res.witness = stripped;
      res.witness_depth = chk.depth;
      res.bound_reached = k;
      return res;
    }
    res.bound_reached = k;
  }
  res.status = resource_hit ? SatStatus::Unknown : SatStatus::UnsatUpToBound;
  return res;
}

}  // namespace oasp
