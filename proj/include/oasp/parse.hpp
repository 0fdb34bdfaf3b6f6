#pragma once
// Text syntax for programs and a canonical renderer.
//
//   rule     := [ name ":" ] head? [ ":-" body ] "."
//   head     := lit { ("v" | "|") lit }
//   body     := elem { "," elem }
//   elem     := lit | glit
//   lit      := ["not"] atom | term ("=" | "!=") term
//   glit     := "forall" Var {"," Var} "(" bool "=>" atom-or-equality ")"
//   bool     := combination of "&", "|", "~", "(...)", atoms, equalities
//   atom     := pred [ "(" term {"," term} ")" ]
//
// Variables start uppercase; constants and predicates are lowercase words,
// digits, reserved #names, or '...' quoted. "%" starts a line comment.

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "oasp/ast.hpp"

namespace oasp {

class ParseError : public ModelError {
 public:
  ParseError(const std::string& what, SourceSpan span)
      : ModelError(what + " at line " + std::to_string(span.line) + ", col " +
                   std::to_string(span.col)),
        span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

namespace detail {

enum class Tok {
  End, Ident, Var, Quoted, LParen, RParen, Comma, Dot, If, Eq, Neq,
  Arrow, Pipe, Amp, Tilde, Colon
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.span = here();
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (c == '(') return punct(t, Tok::LParen, 1);
    if (c == ')') return punct(t, Tok::RParen, 1);
    if (c == ',') return punct(t, Tok::Comma, 1);
    if (c == '.') return punct(t, Tok::Dot, 1);
    if (c == '|') return punct(t, Tok::Pipe, 1);
    if (c == '&') return punct(t, Tok::Amp, 1);
    if (c == '~') return punct(t, Tok::Tilde, 1);
    if (c == ':') return peek(1) == '-' ? punct(t, Tok::If, 2) : punct(t, Tok::Colon, 1);
    if (c == '=') return peek(1) == '>' ? punct(t, Tok::Arrow, 2) : punct(t, Tok::Eq, 1);
    if (c == '!') {
      if (peek(1) == '=') return punct(t, Tok::Neq, 2);
      fail("unexpected '!'", t.span);
    }
    if (c == '\'') {
      ++pos_; ++col_;
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '\'' && src_[pos_] != '\n') {
        s += src_[pos_++]; ++col_;
      }
      if (pos_ >= src_.size() || src_[pos_] != '\'')
        fail("unterminated quoted constant", t.span);
      ++pos_; ++col_;
      t.kind = Tok::Quoted;
      t.text = s;
      return t;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      t.kind = Tok::Var;
      t.text = word();
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c)) ||
        std::isdigit(static_cast<unsigned char>(c)) || c == '#' || c == '_') {
      t.kind = Tok::Ident;
      t.text = word();
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", t.span);
  }

  [[noreturn]] void fail(const std::string& msg, SourceSpan span) const {
    throw ParseError(msg, span);
  }

 private:
  SourceSpan here() const { return {line_, col_, pos_}; }
  char peek(std::size_t k) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }
  Token punct(Token& t, Tok k, int len) {
    t.kind = k;
    t.text = src_.substr(pos_, len);
    pos_ += len; col_ += len;
    return t;
  }
  std::string word() {
    std::string s;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#') {
        s += c; ++pos_; ++col_;
      } else {
        break;
      }
    }
    return s;
  }
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_; ++line_; col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_; ++col_;
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class ProgramParser {
 public:
  explicit ProgramParser(const std::string& src) : lex_(src) { advance(); }

  Program parse() {
    Program p;
    while (cur_.kind != Tok::End) {
      SourceSpan at = cur_.span;
      p.rules.push_back(parse_rule());
      Program prefix = p;  // report invariant violations at the offending rule
      assign_rule_names(prefix);
      auto errs = validate(prefix);
      if (!errs.empty()) lex_.fail(errs.front(), at);
    }
    assign_rule_names(p);
    normalize(p);
    return p;
  }

 private:
  void advance() {
    if (pending_) {
      cur_ = *pending_;
      pending_.reset();
    } else {
      cur_ = lex_.next();
    }
  }
  bool at(Tok k) const { return cur_.kind == k; }
  bool at_word(const char* w) const {
    return cur_.kind == Tok::Ident && cur_.text == w;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) lex_.fail("expected " + what, cur_.span);
    Token t = cur_;
    advance();
    return t;
  }

  Rule parse_rule() {
    Rule r;
    if (at(Tok::Ident)) {
      Token save = cur_;
      advance();
      if (at(Tok::Colon)) {
        if (save.text == "not" || save.text == "forall" || reserved_name(save.text))
          lex_.fail("invalid rule name '" + save.text + "'", save.span);
        r.name = save.text;
        advance();
      } else {
        pending_ = cur_;  // restore: the ident starts a head literal
        cur_ = save;
      }
    }
    if (!at(Tok::If) && !at(Tok::Dot)) {
      r.head.push_back(parse_literal());
      while (head_separator()) r.head.push_back(parse_literal());
    }
    if (at(Tok::If)) {
      advance();
      for (;;) {
        if (at_word("forall")) {
          r.glits.push_back(parse_glit());
        } else {
          r.body.push_back(parse_literal());
        }
        if (!at(Tok::Comma)) break;
        advance();
      }
    }
    expect(Tok::Dot, "'.'");
    return r;
  }

  bool head_separator() {
    if (at(Tok::Pipe) || at_word("v")) {
      advance();
      return true;
    }
    return false;
  }

  struct AtomNeq {
    Atom atom;
    bool neq = false;  // true when written "t != s"
  };

  Literal parse_literal() {
    bool neg = false;
    SourceSpan at = cur_.span;
    if (at_word("not")) {
      advance();
      neg = true;
    }
    AtomNeq a = parse_atom_neq();
    if (a.neq && neg)
      lex_.fail("'not' before '!='; write 't = s' instead", at);
    return {std::move(a.atom), neg || a.neq};
  }

  GeneralizedLiteral parse_glit() {
    advance();  // forall
    GeneralizedLiteral g;
    g.bound.push_back(expect(Tok::Var, "variable").text);
    while (at(Tok::Comma)) {
      advance();
      g.bound.push_back(expect(Tok::Var, "variable").text);
    }
    expect(Tok::LParen, "'('");
    g.antecedent = parse_bool_or();
    expect(Tok::Arrow, "'=>'");
    SourceSpan at = cur_.span;
    AtomNeq c = parse_atom_neq();
    if (c.neq) lex_.fail("negated consequent in generalized literal", at);
    g.consequent = std::move(c.atom);
    expect(Tok::RParen, "')'");
    return g;
  }

  BoolPtr parse_bool_or() {
    std::vector<BoolPtr> kids{parse_bool_and()};
    while (at(Tok::Pipe)) {
      advance();
      kids.push_back(parse_bool_and());
    }
    return bor(std::move(kids));
  }
  BoolPtr parse_bool_and() {
    std::vector<BoolPtr> kids{parse_bool_unary()};
    while (at(Tok::Amp)) {
      advance();
      kids.push_back(parse_bool_unary());
    }
    return band(std::move(kids));
  }
  BoolPtr parse_bool_unary() {
    if (at(Tok::Tilde)) {
      advance();
      return bnot(parse_bool_unary());
    }
    if (at(Tok::LParen)) {
      advance();
      BoolPtr f = parse_bool_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    AtomNeq a = parse_atom_neq();
    BoolPtr leaf = batom(std::move(a.atom));
    return a.neq ? bnot(std::move(leaf)) : leaf;
  }

  AtomNeq parse_atom_neq() {
    if (at(Tok::Var) || at(Tok::Quoted)) return finish_equality(parse_term());
    Token id = expect(Tok::Ident, "atom");
    if (id.text == "not" || id.text == "forall")
      lex_.fail("keyword '" + id.text + "' in atom position", id.span);
    if (at(Tok::Eq) || at(Tok::Neq)) return finish_equality(cst(id.text));
    AtomNeq a;
    a.atom.pred = id.text;
    if (at(Tok::LParen)) {
      advance();
      a.atom.args.push_back(parse_term());
      while (at(Tok::Comma)) {
        advance();
        a.atom.args.push_back(parse_term());
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  AtomNeq finish_equality(Term l) {
    AtomNeq a;
    if (at(Tok::Neq)) {
      advance();
      a.neq = true;
    } else {
      expect(Tok::Eq, "'=' or '!='");
    }
    a.atom = eq_atom(std::move(l), parse_term());
    return a;
  }

  Term parse_term() {
    if (at(Tok::Var)) {
      Token t = cur_;
      advance();
      return var(t.text);
    }
    if (at(Tok::Quoted)) {
      Token t = cur_;
      advance();
      return cst(t.text);
    }
    Token t = expect(Tok::Ident, "term");
    if (t.text == "not" || t.text == "forall")
      lex_.fail("keyword '" + t.text + "' in term position", t.span);
    return cst(t.text);
  }

  Token cur_;
  std::optional<Token> pending_;
  Lexer lex_;
};

}  // namespace detail

inline Program parse_program(const std::string& text) {
  detail::ProgramParser p(text);
  return p.parse();
}

// ---- rendering ----

inline bool plain_constant_name(const std::string& s) {
  if (s.empty()) return false;
  char c = s[0];
  if (!(std::islower(static_cast<unsigned char>(c)) ||
        std::isdigit(static_cast<unsigned char>(c)) || c == '#' || c == '_'))
    return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '#'))
      return false;
  return true;
}

inline std::string render(const Term& t) {
  if (t.kind == TermKind::Variable) return t.name;
  return plain_constant_name(t.name) ? t.name : "'" + t.name + "'";
}

inline std::string render(const Atom& a) {
  if (a.is_equality()) return render(a.args[0]) + " = " + render(a.args[1]);
  std::string s = a.pred;
  if (!a.args.empty()) {
    s += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ",";
      s += render(a.args[i]);
    }
    s += ")";
  }
  return s;
}

inline std::string render(const Literal& l) {
  if (l.atom.is_equality()) {
    std::string op = l.naf ? " != " : " = ";
    return render(l.atom.args[0]) + op + render(l.atom.args[1]);
  }
  return (l.naf ? "not " : "") + render(l.atom);
}

inline std::string render(const BoolPtr& f) {
  switch (f->kind) {
    case BoolFormula::Kind::Atom:
      return render(f->leaf);
    case BoolFormula::Kind::Not: {
      const BoolPtr& k = f->kids[0];
      if (k->kind == BoolFormula::Kind::Atom && k->leaf.is_equality())
        return render(k->leaf.args[0]) + " != " + render(k->leaf.args[1]);
      if (k->kind == BoolFormula::Kind::Atom) return "~" + render(k);
      return "~(" + render(k) + ")";
    }
    case BoolFormula::Kind::And: {
      std::string s;
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) s += " & ";
        const BoolPtr& k = f->kids[i];
        s += k->kind == BoolFormula::Kind::Or ? "(" + render(k) + ")" : render(k);
      }
      return s;
    }
    case BoolFormula::Kind::Or: {
      std::string s;
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) s += " | ";
        s += render(f->kids[i]);
      }
      return s;
    }
  }
  return "";
}

inline std::string render(const GeneralizedLiteral& g) {
  std::string s = "forall ";
  for (std::size_t i = 0; i < g.bound.size(); ++i) {
    if (i) s += ", ";
    s += g.bound[i];
  }
  s += " (" + render(g.antecedent) + " => " + render(g.consequent) + ")";
  return s;
}

inline std::string render(const Rule& r) {
  std::string s;
  if (!r.name.empty()) s += r.name + ": ";
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) s += " v ";
    s += render(r.head[i]);
  }
  if (!r.body.empty() || !r.glits.empty()) {
    s += (r.head.empty() ? ":- " : " :- ");
    bool first = true;
    for (const Literal& l : r.body) {
      if (!first) s += ", ";
      first = false;
      s += render(l);
    }
    for (const GeneralizedLiteral& g : r.glits) {
      if (!first) s += ", ";
      first = false;
      s += render(g);
    }
  }
  s += ".";
  return s;
}

inline std::string render_program(const Program& p) {
  std::string s;
  for (const Rule& r : p.rules) s += render(r) + "\n";
  return s;
}

}  // namespace oasp
