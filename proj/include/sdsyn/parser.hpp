// Recursive-descent parsers for the controller command language and the
// assertion language. Concrete syntax:
//
//   cmd    ::= atom (';' atom)*                       (right associative)
//   atom   ::= 'skip' | x ':=' aexp | 'xa' ':=' mode
//            | 'if' bexp 'then' atom 'else' atom
//            | 'switch' '{' guard ':' cmd (';' guard ':' cmd)* '}'
//            | '{' cmd '}'
//   bexp   ::= disjunction over '&&', '||', '!', comparisons, sense vars
//   fml    ::= bexp syntax plus mode equality (xa = Acl, Acl = Brk) and
//              'exists v. fml' / 'forall v. fml'
//
// `switch` desugars into a nested conditional chain; the final arm becomes
// the else branch and overlapping guards resolve in textual order.
#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdsyn/ast.hpp"

namespace sdsyn {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  double num = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) { tokenize(src); }

  const Token& peek(int ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  size_t mark() const { return pos_; }
  void rewind(size_t m) { pos_ = m; }

  bool accept_punct(const std::string& p) {
    if (peek().kind == Token::Kind::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }
  bool accept_ident(const std::string& id) {
    if (peek().kind == Token::Kind::Ident && peek().text == id) {
      next();
      return true;
    }
    return false;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " (got '" + peek().text + "')", peek().line,
                     peek().col);
  }

 private:
  void tokenize(const std::string& s) {
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t n) {
      for (size_t k = 0; k < n; ++k, ++i) {
        if (s[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump(1);
        continue;
      }
      if (c == '#') {  // comment to end of line
        while (i < s.size() && s[i] != '\n') bump(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = s.substr(i, j - i);
        bump(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i + 1 < s.size() &&
                  std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
        const char* start = s.c_str() + i;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        t.kind = Token::Kind::Number;
        t.num = v;
        t.text = std::string(start, static_cast<size_t>(end - start));
        bump(static_cast<size_t>(end - start));
      } else {
        static const char* two[] = {":=", "<=", ">=", "&&", "||"};
        std::string p(1, c);
        if (i + 1 < s.size()) {
          std::string pp = s.substr(i, 2);
          for (auto* q : two)
            if (pp == q) p = pp;
        }
        t.kind = Token::Kind::Punct;
        t.text = p;
        bump(p.size());
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.text = "<end>";
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

namespace detail {

class Parser {
 public:
  Parser(const std::string& src, const VarTable& vars)
      : lex_(src), vars_(vars) {}

  CmdPtr controller() {
    CmdPtr c = cmd_seq();
    if (!lex_.at_end()) lex_.fail("trailing input after command");
    return c;
  }

  FormulaPtr formula_top() {
    FormulaPtr f = formula();
    if (!lex_.at_end()) lex_.fail("trailing input after formula");
    return f;
  }

  AExpPtr aexp_top() {
    AExpPtr a = aexp();
    if (!lex_.at_end()) lex_.fail("trailing input after expression");
    return a;
  }

 private:
  // --- commands ---
  CmdPtr cmd_seq() {
    CmdPtr first = cmd_atom();
    if (lex_.accept_punct(";")) return Cmd::seq(first, cmd_seq());
    return first;
  }

  CmdPtr cmd_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Punct && t.text == "{") {
      lex_.next();
      CmdPtr c = cmd_seq();
      lex_.expect_punct("}");
      return c;
    }
    if (t.kind != Token::Kind::Ident) lex_.fail("expected command");
    if (t.text == "skip") {
      lex_.next();
      return Cmd::skip();
    }
    if (t.text == "if") {
      lex_.next();
      BExpPtr g = bexp();
      if (!lex_.accept_ident("then")) lex_.fail("expected 'then'");
      CmdPtr c1 = cmd_atom();
      if (!lex_.accept_ident("else")) lex_.fail("expected 'else'");
      CmdPtr c2 = cmd_atom();
      return Cmd::branch(g, c1, c2);
    }
    if (t.text == "switch") {
      lex_.next();
      return switch_sugar();
    }
    // assignment
    Token name = lex_.next();
    lex_.expect_punct(":=");
    if (name.text == vars_.act_var) {
      const Token& m = lex_.peek();
      if (m.kind != Token::Kind::Ident || !vars_.is_mode(m.text))
        lex_.fail("expected a declared mode");
      lex_.next();
      return Cmd::assign_act(m.text);
    }
    if (!vars_.is_think(name.text))
      throw ParseError("undeclared think variable '" + name.text + "'",
                       name.line, name.col);
    return Cmd::assign_think(name.text, aexp());
  }

  // switch { g1: c1; g2: c2; ...; gn: cn }  ->  if g1 c1 else if g2 ... cn
  CmdPtr switch_sugar() {
    lex_.expect_punct("{");
    std::vector<std::pair<BExpPtr, CmdPtr>> arms;
    while (true) {
      BExpPtr g = bexp();
      lex_.expect_punct(":");
      CmdPtr c = cmd_atom();
      arms.emplace_back(g, c);
      if (!lex_.accept_punct(";")) break;
    }
    lex_.expect_punct("}");
    if (arms.size() < 2) lex_.fail("switch needs at least two arms");
    CmdPtr chain = arms.back().second;  // last arm's guard is dropped
    for (size_t i = arms.size() - 1; i-- > 0;)
      chain = Cmd::branch(arms[i].first, arms[i].second, chain);
    return chain;
  }

  // --- boolean expressions ---
  BExpPtr bexp() { return bexp_or(); }
  BExpPtr bexp_or() {
    BExpPtr l = bexp_and();
    while (lex_.accept_punct("||")) l = BExp::disj(l, bexp_and());
    return l;
  }
  BExpPtr bexp_and() {
    BExpPtr l = bexp_not();
    while (lex_.accept_punct("&&")) l = BExp::conj(l, bexp_not());
    return l;
  }
  BExpPtr bexp_not() {
    if (lex_.accept_punct("!")) return BExp::negate(bexp_not());
    return bexp_atom();
  }
  BExpPtr bexp_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "true") {
        lex_.next();
        return BExp::truth(true);
      }
      if (t.text == "false") {
        lex_.next();
        return BExp::truth(false);
      }
      if (vars_.is_sense(t.text)) {
        lex_.next();
        return BExp::sense(t.text);
      }
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      // Either a parenthesized boolean or a parenthesized arithmetic
      // operand of a comparison; backtrack on failure.
      size_t m = lex_.mark();
      lex_.next();
      try {
        BExpPtr inner = bexp();
        lex_.expect_punct(")");
        if (!is_rop(lex_.peek())) return inner;
      } catch (const ParseError&) {
      }
      lex_.rewind(m);
    }
    return comparison<BExpPtr>(
        [](Rop r, AExpPtr a, AExpPtr b) { return BExp::cmp(r, a, b); });
  }

  // --- formulas ---
  FormulaPtr formula() { return fml_or(); }
  FormulaPtr fml_or() {
    FormulaPtr l = fml_and();
    while (lex_.accept_punct("||")) l = Formula::disj(l, fml_and());
    return l;
  }
  FormulaPtr fml_and() {
    FormulaPtr l = fml_not();
    while (lex_.accept_punct("&&")) l = Formula::conj(l, fml_not());
    return l;
  }
  FormulaPtr fml_not() {
    if (lex_.accept_punct("!")) return Formula::negate(fml_not());
    return fml_atom();
  }
  FormulaPtr fml_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "true") {
        lex_.next();
        return Formula::truth(true);
      }
      if (t.text == "false") {
        lex_.next();
        return Formula::truth(false);
      }
      if (t.text == "exists" || t.text == "forall") {
        bool ex = t.text == "exists";
        lex_.next();
        const Token& v = lex_.peek();
        if (v.kind != Token::Kind::Ident) lex_.fail("expected bound variable");
        std::string name = lex_.next().text;
        lex_.expect_punct(".");
        bound_.push_back(name);
        FormulaPtr body = formula();
        bound_.pop_back();
        return ex ? Formula::exists(name, body) : Formula::forall(name, body);
      }
      if (vars_.is_sense(t.text) && !is_rop(lex_.peek(1))) {
        lex_.next();
        return Formula::sense(t.text);
      }
      if (vars_.is_mode(t.text) || t.text == vars_.act_var) {
        ModeExpr a = mode_expr();
        lex_.expect_punct("=");
        ModeExpr b = mode_expr();
        return Formula::mode_eq(a, b);
      }
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      size_t m = lex_.mark();
      lex_.next();
      try {
        FormulaPtr inner = formula();
        lex_.expect_punct(")");
        if (!is_rop(lex_.peek())) return inner;
      } catch (const ParseError&) {
      }
      lex_.rewind(m);
    }
    return comparison<FormulaPtr>(
        [](Rop r, AExpPtr a, AExpPtr b) { return Formula::cmp(r, a, b); });
  }

  ModeExpr mode_expr() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) lex_.fail("expected mode expression");
    if (t.text == vars_.act_var) {
      lex_.next();
      return ModeExpr::act();
    }
    if (vars_.is_mode(t.text)) return ModeExpr::lit(lex_.next().text);
    lex_.fail("expected mode or act variable");
  }

  static bool is_rop(const Token& t) {
    return t.kind == Token::Kind::Punct &&
           (t.text == "=" || t.text == "<" || t.text == "<=" ||
            t.text == ">" || t.text == ">=");
  }
  Rop rop() {
    Token t = lex_.next();
    if (t.text == "=") return Rop::Eq;
    if (t.text == "<") return Rop::Lt;
    if (t.text == "<=") return Rop::Le;
    if (t.text == ">") return Rop::Gt;
    if (t.text == ">=") return Rop::Ge;
    lex_.fail("expected comparison operator");
  }

  template <typename R, typename Mk>
  R comparison(Mk mk) {
    AExpPtr a = aexp();
    if (!is_rop(lex_.peek()))
      lex_.fail("expected comparison operator");
    Rop r = rop();
    AExpPtr b = aexp();
    return mk(r, a, b);
  }

  // --- arithmetic ---
  AExpPtr aexp() {
    AExpPtr l = term();
    while (true) {
      if (lex_.accept_punct("+"))
        l = AExp::bin(AOp::Add, l, term());
      else if (lex_.accept_punct("-"))
        l = AExp::bin(AOp::Sub, l, term());
      else
        return l;
    }
  }
  AExpPtr term() {
    AExpPtr l = factor();
    while (lex_.accept_punct("*")) l = AExp::bin(AOp::Mul, l, factor());
    return l;
  }
  AExpPtr factor() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      lex_.next();
      return AExp::literal(t.num);
    }
    if (t.kind == Token::Kind::Punct && t.text == "-") {
      lex_.next();
      if (lex_.peek().kind == Token::Kind::Number) {
        Token n = lex_.next();
        return AExp::literal(-n.num);
      }
      return AExp::bin(AOp::Sub, AExp::literal(0.0), factor());
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      lex_.next();
      AExpPtr a = aexp();
      lex_.expect_punct(")");
      return a;
    }
    if (t.kind == Token::Kind::Ident) {
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
        if (*it == t.text) {
          lex_.next();
          return AExp::logical(t.text);
        }
      if (vars_.is_think(t.text)) {
        lex_.next();
        return AExp::think(t.text);
      }
      if (VarTable::is_logical_name(t.text)) {
        lex_.next();
        return AExp::logical(t.text);
      }
      throw ParseError("undeclared variable '" + t.text + "'", t.line, t.col);
    }
    lex_.fail("expected arithmetic expression");
  }

  Lexer lex_;
  const VarTable& vars_;
  std::vector<std::string> bound_;
};

}  // namespace detail

inline CmdPtr parse_controller(const std::string& text, const VarTable& vars) {
  return detail::Parser(text, vars).controller();
}
inline FormulaPtr parse_formula(const std::string& text, const VarTable& vars) {
  return detail::Parser(text, vars).formula_top();
}
inline AExpPtr parse_aexp(const std::string& text, const VarTable& vars) {
  return detail::Parser(text, vars).aexp_top();
}

}  // namespace sdsyn
